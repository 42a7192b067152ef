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

#ifndef V2I_SCENE_SCENE_FRAME_HPP_
#define V2I_SCENE_SCENE_FRAME_HPP_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace v2i::scene {

// Numeric values match the wire encoding.
enum class ObjectClass : std::uint8_t { kCar = 1, kPedestrian = 2 };

std::string_view to_string(ObjectClass c);
std::optional<ObjectClass> object_class_from_string(std::string_view s);

struct BoundingBox {
  double u_min = 0.0;
  double v_min = 0.0;
  double u_max = 0.0;
  double v_max = 0.0;

  double center_u() const { return 0.5 * (u_min + u_max); }
  double center_v() const { return 0.5 * (v_min + v_max); }

  bool operator==(const BoundingBox&) const = default;
};

// Depth sampled at the midpoints of the four bounding-box edges.
struct EdgeDepths {
  double top_m = 0.0;
  double bottom_m = 0.0;
  double left_m = 0.0;
  double right_m = 0.0;

  bool operator==(const EdgeDepths&) const = default;
};

struct Detection {
  std::uint32_t object_id = 0;
  ObjectClass object_class = ObjectClass::kCar;
  BoundingBox bbox;
  double confidence = 1.0;
  double depth_center_m = 0.0;
  std::optional<EdgeDepths> edges;

  bool operator==(const Detection&) const = default;
};

struct SceneFrame {
  std::uint64_t frame_index = 0;
  std::uint64_t timestamp_us = 0;
  double ego_speed_mps = 0.0;
  double ego_lat = 0.0;
  double ego_lon = 0.0;
  double ego_yaw_deg = 0.0;
  std::vector<Detection> detections;
  // Set on the terminal frame of a generated scenario whose actor reached a
  // zero gap. Such a frame carries no detections.
  std::optional<std::uint32_t> collision_with;

  // Per-frame invariants (box ordering, positive depths, confidence range,
  // unique ids, non-negative ego speed). Throws Errc::kInvalidArgument.
  void validate() const;

  bool operator==(const SceneFrame&) const = default;
};

// Pull-style frame stream. Returns std::nullopt once exhausted.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual std::optional<SceneFrame> next() = 0;
};

class VectorFrameSource : public FrameSource {
 public:
  explicit VectorFrameSource(std::vector<SceneFrame> frames)
      : frames_(std::move(frames)) {}

  std::optional<SceneFrame> next() override {
    if (pos_ >= frames_.size()) return std::nullopt;
    return frames_[pos_++];
  }

 private:
  std::vector<SceneFrame> frames_;
  std::size_t pos_ = 0;
};

std::vector<SceneFrame> drain(FrameSource& source);

}  // namespace v2i::scene

#endif  // V2I_SCENE_SCENE_FRAME_HPP_
