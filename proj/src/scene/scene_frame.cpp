// Copyright 2026 The v2i-twin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "v2i/scene/scene_frame.hpp"

#include <cmath>
#include <string>
#include <unordered_set>

#include "v2i/error.hpp"

namespace v2i::scene {

namespace {

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

void fail(const std::string& what) { throw Error(Errc::kInvalidArgument, what); }

}  // namespace

std::string_view to_string(ObjectClass c) {
  switch (c) {
    case ObjectClass::kCar: return "Car";
    case ObjectClass::kPedestrian: return "Pedestrian";
  }
  return "Unknown";
}

std::optional<ObjectClass> object_class_from_string(std::string_view s) {
  if (s == "Car") return ObjectClass::kCar;
  if (s == "Pedestrian") return ObjectClass::kPedestrian;
  return std::nullopt;
}

void SceneFrame::validate() const {
  if (!std::isfinite(ego_speed_mps) || ego_speed_mps < 0.0) {
    fail("ego_speed_mps must be >= 0");
  }
  if (std::abs(ego_lat) > 90.0 || std::abs(ego_lon) > 180.0) {
    fail("ego position out of geodetic range");
  }
  if (!std::isfinite(ego_yaw_deg)) fail("ego_yaw_deg must be finite");
  if (collision_with && !detections.empty()) {
    fail("collision marker frame must not carry detections");
  }

  std::unordered_set<std::uint32_t> ids;
  for (const auto& d : detections) {
    const auto tag = "object " + std::to_string(d.object_id) + ": ";
    if (!ids.insert(d.object_id).second) fail(tag + "duplicate id");
    const auto& b = d.bbox;
    if (!(std::isfinite(b.u_min) && std::isfinite(b.u_max) &&
          std::isfinite(b.v_min) && std::isfinite(b.v_max))) {
      fail(tag + "bbox must be finite");
    }
    if (!(b.u_min < b.u_max)) fail(tag + "u_min must be < u_max");
    if (!(b.v_min < b.v_max)) fail(tag + "v_min must be < v_max");
    if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
      fail(tag + "confidence must lie in [0, 1]");
    }
    if (!positive(d.depth_center_m)) fail(tag + "depth_center_m must be > 0");
    if (d.edges) {
      const auto& e = *d.edges;
      if (!(positive(e.top_m) && positive(e.bottom_m) && positive(e.left_m) &&
            positive(e.right_m))) {
        fail(tag + "edge depths must be > 0");
      }
    }
  }
}

std::vector<SceneFrame> drain(FrameSource& source) {
  std::vector<SceneFrame> out;
  while (auto f = source.next()) {
    out.push_back(std::move(*f));
  }
  return out;
}

}  // namespace v2i::scene
