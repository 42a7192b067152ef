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

#ifndef V2I_SAFETY_TRACKER_HPP_
#define V2I_SAFETY_TRACKER_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "v2i/geometry/geometry.hpp"
#include "v2i/safety/metrics.hpp"
#include "v2i/scene/scene_frame.hpp"

namespace v2i::safety {

struct TrackerConfig {
  double ema_alpha = 0.3;
  double fps = 20.0;
  std::size_t depth_window = 5;
  std::uint64_t track_ttl_frames = 10;
  double ego_speed_min_mps = 0.1;
  double closing_speed_eps_mps = 0.05;
  SafetyThresholds thresholds;

  void validate() const;
};

struct Track {
  std::uint32_t object_id = 0;
  scene::ObjectClass object_class = scene::ObjectClass::kCar;
  std::vector<DepthSample> depth_samples;  // oldest first, at most depth_window
  double smoothed_depth_m = 0.0;
  std::optional<double> ema_range_rate_mps;
  double raw_ttc_s = kInf;
  double raw_thw_s = kInf;
  double ema_ttc_s = kInf;
  double ema_thw_s = kInf;
  double yaw_deg = 0.0;
  Orientation orientation = Orientation::kParallel;
  double abs_speed_mps = 0.0;
  double approach_speed_mps = 0.0;
  geo::CameraPoint camera_point;
  std::uint64_t last_seen_frame = 0;
  std::uint64_t last_seen_us = 0;
  SafetyState state = SafetyState::kSafe;
};

struct ObjectReport {
  std::uint32_t object_id = 0;
  scene::ObjectClass object_class = scene::ObjectClass::kCar;
  double distance_m = 0.0;
  geo::CameraPoint rel;
  double abs_speed_mps = 0.0;
  double range_rate_mps = 0.0;
  double approach_speed_mps = 0.0;
  double yaw_deg = 0.0;
  Orientation orientation = Orientation::kParallel;
  double ttc_s = kInf;
  double thw_s = kInf;
  SafetyState state = SafetyState::kSafe;
  // Not detected in this frame; values are carried over from last sighting.
  bool stale = false;
};

struct SafetyReport {
  std::uint64_t frame_index = 0;
  std::uint64_t timestamp_us = 0;
  double ego_speed_mps = 0.0;
  std::vector<ObjectReport> objects;  // ascending object_id
  SafetyState overall_state = SafetyState::kSafe;
};

// Per-stream object tracker. Updates must be fed in strictly increasing
// timestamp order (Errc::kStreamOrder otherwise).
class Tracker {
 public:
  explicit Tracker(TrackerConfig cfg = {}, geo::CameraIntrinsics intr = {});

  SafetyReport update(const scene::SceneFrame& frame);

  const std::map<std::uint32_t, Track>& tracks() const { return tracks_; }
  const TrackerConfig& config() const { return cfg_; }

 private:
  void observe(Track& track, const scene::Detection& det,
               const scene::SceneFrame& frame) const;

  TrackerConfig cfg_;
  geo::CameraIntrinsics intr_;
  std::map<std::uint32_t, Track> tracks_;
  std::optional<std::uint64_t> last_ts_;
};

}  // namespace v2i::safety

#endif  // V2I_SAFETY_TRACKER_HPP_
