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

#include "v2i/scene/scene_log.hpp"

#include <json.hpp>

#include "v2i/error.hpp"

namespace v2i::scene {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  throw Error(Errc::kParseError, "line " + std::to_string(line_no) + ": " + what,
              line_no);
}

double number(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw std::invalid_argument(std::string(key) + " must be a number");
  return v.get<double>();
}

std::uint64_t unsigned_number(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_unsigned()) {
    throw std::invalid_argument(std::string(key) + " must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::optional<double> optional_number(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw std::invalid_argument(std::string(key) + " must be a number");
  return it->get<double>();
}

// Resolves one depth sample from either "<name>_m" (scaled by `unit`) or
// "<name>_px" disparity.
std::optional<double> depth_sample(const json& d, const std::string& name,
                                   double unit, const geo::CameraIntrinsics& intr) {
  if (auto m = optional_number(d, ("depth_" + name + "_m").c_str())) {
    return *m * unit;
  }
  if (auto px = optional_number(d, ("disparity_" + name + "_px").c_str())) {
    return geo::tilt_compensate(geo::disparity_to_depth(*px, intr), intr);
  }
  return std::nullopt;
}

Detection parse_detection(const json& d, double unit,
                          const geo::CameraIntrinsics& intr) {
  Detection det;
  const auto id = unsigned_number(d, "object_id");
  if (id > 0xFFFFFFFFull) throw std::invalid_argument("object_id exceeds 32 bits");
  det.object_id = static_cast<std::uint32_t>(id);

  const auto& cls = d.at("class");
  if (!cls.is_string()) throw std::invalid_argument("class must be a string");
  const auto parsed = object_class_from_string(cls.get<std::string>());
  if (!parsed) throw std::invalid_argument("unknown class '" + cls.get<std::string>() + "'");
  det.object_class = *parsed;

  const auto& bbox = d.at("bbox");
  if (!bbox.is_array() || bbox.size() != 4) {
    throw std::invalid_argument("bbox must be [u_min, v_min, u_max, v_max]");
  }
  for (const auto& v : bbox) {
    if (!v.is_number()) throw std::invalid_argument("bbox entries must be numbers");
  }
  det.bbox = {bbox[0].get<double>(), bbox[1].get<double>(), bbox[2].get<double>(),
              bbox[3].get<double>()};
  det.confidence = optional_number(d, "confidence").value_or(1.0);

  const auto center = depth_sample(d, "center", unit, intr);
  if (!center) throw std::invalid_argument("missing depth_center_m / disparity_center_px");
  det.depth_center_m = *center;

  const auto top = depth_sample(d, "top", unit, intr);
  const auto bottom = depth_sample(d, "bottom", unit, intr);
  const auto left = depth_sample(d, "left", unit, intr);
  const auto right = depth_sample(d, "right", unit, intr);
  const int present = int{top.has_value()} + int{bottom.has_value()} +
                      int{left.has_value()} + int{right.has_value()};
  if (present == 4) {
    det.edges = EdgeDepths{*top, *bottom, *left, *right};
  } else if (present != 0) {
    throw std::invalid_argument("edge depths must be given for all four edges or none");
  }
  return det;
}

}  // namespace

std::string to_json_line(const SceneFrame& frame) {
  ordered_json j;
  j["schema"] = kSceneLogSchema;
  j["frame_index"] = frame.frame_index;
  j["timestamp_us"] = frame.timestamp_us;
  j["ego_speed_mps"] = frame.ego_speed_mps;
  j["ego_lat"] = frame.ego_lat;
  j["ego_lon"] = frame.ego_lon;
  j["ego_yaw_deg"] = frame.ego_yaw_deg;
  j["depth_unit"] = "m";
  auto dets = ordered_json::array();
  for (const auto& d : frame.detections) {
    ordered_json o;
    o["object_id"] = d.object_id;
    o["class"] = to_string(d.object_class);
    o["bbox"] = {d.bbox.u_min, d.bbox.v_min, d.bbox.u_max, d.bbox.v_max};
    o["confidence"] = d.confidence;
    o["depth_center_m"] = d.depth_center_m;
    if (d.edges) {
      o["depth_top_m"] = d.edges->top_m;
      o["depth_bottom_m"] = d.edges->bottom_m;
      o["depth_left_m"] = d.edges->left_m;
      o["depth_right_m"] = d.edges->right_m;
    }
    dets.push_back(std::move(o));
  }
  j["detections"] = std::move(dets);
  if (frame.collision_with) j["collision_with"] = *frame.collision_with;
  return j.dump();
}

SceneFrame parse_json_line(std::string_view line, std::size_t line_no,
                           const geo::CameraIntrinsics& intr) {
  SceneFrame frame;
  try {
    const json j = json::parse(line);
    if (!j.is_object()) throw std::invalid_argument("line is not a JSON object");
    if (const auto it = j.find("schema"); it != j.end()) {
      if (!it->is_number_integer() || it->get<int>() != kSceneLogSchema) {
        throw std::invalid_argument("unsupported schema");
      }
    }
    double unit = 1.0;
    if (const auto it = j.find("depth_unit"); it != j.end()) {
      const auto u = it->get<std::string>();
      if (u == "mm") {
        unit = 1e-3;
      } else if (u != "m") {
        throw std::invalid_argument("depth_unit must be 'm' or 'mm'");
      }
    }
    frame.frame_index = unsigned_number(j, "frame_index");
    frame.timestamp_us = unsigned_number(j, "timestamp_us");
    frame.ego_speed_mps = number(j, "ego_speed_mps");
    frame.ego_lat = optional_number(j, "ego_lat").value_or(0.0);
    frame.ego_lon = optional_number(j, "ego_lon").value_or(0.0);
    frame.ego_yaw_deg = optional_number(j, "ego_yaw_deg").value_or(0.0);
    if (const auto it = j.find("detections"); it != j.end()) {
      if (!it->is_array()) throw std::invalid_argument("detections must be an array");
      for (const auto& d : *it) {
        frame.detections.push_back(parse_detection(d, unit, intr));
      }
    }
    if (const auto it = j.find("collision_with"); it != j.end() && !it->is_null()) {
      const auto id = unsigned_number(j, "collision_with");
      if (id > 0xFFFFFFFFull) throw std::invalid_argument("collision_with exceeds 32 bits");
      frame.collision_with = static_cast<std::uint32_t>(id);
    }
    frame.validate();
  } catch (const json::exception& e) {
    parse_fail(line_no, e.what());
  } catch (const std::invalid_argument& e) {
    parse_fail(line_no, e.what());
  } catch (const Error& e) {
    parse_fail(line_no, e.what());
  }
  return frame;
}

SceneLogReader::SceneLogReader(const std::filesystem::path& path,
                               geo::CameraIntrinsics intr)
    : in_(path), intr_(intr) {
  if (!in_) throw Error(Errc::kIo, "cannot open " + path.string());
}

std::optional<SceneFrame> SceneLogReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto frame = parse_json_line(line, line_no_, intr_);
    if (last_ts_ && frame.timestamp_us <= *last_ts_) {
      throw Error(Errc::kStreamOrder,
                  "line " + std::to_string(line_no_) + ": timestamp " +
                      std::to_string(frame.timestamp_us) + " not after " +
                      std::to_string(*last_ts_),
                  line_no_);
    }
    last_ts_ = frame.timestamp_us;
    return frame;
  }
  return std::nullopt;
}

SceneLogWriter::SceneLogWriter(const std::filesystem::path& path)
    : out_(path, std::ios::trunc), path_(path) {
  if (!out_) throw Error(Errc::kIo, "cannot open " + path.string() + " for writing");
}

void SceneLogWriter::write(const SceneFrame& frame) {
  out_ << to_json_line(frame) << '\n';
  if (!out_) throw Error(Errc::kIo, "write failed on " + path_.string());
}

void SceneLogWriter::flush() {
  out_.flush();
  if (!out_) throw Error(Errc::kIo, "flush failed on " + path_.string());
}

std::vector<SceneFrame> replay_log(const std::filesystem::path& path,
                                   const geo::CameraIntrinsics& intr) {
  SceneLogReader reader(path, intr);
  return drain(reader);
}

void write_log(const std::vector<SceneFrame>& frames,
               const std::filesystem::path& path) {
  SceneLogWriter writer(path);
  for (const auto& f : frames) writer.write(f);
  writer.flush();
}

}  // namespace v2i::scene
