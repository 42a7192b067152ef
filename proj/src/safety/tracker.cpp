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

#include "v2i/safety/tracker.hpp"

#include <string>

#include "v2i/error.hpp"

namespace v2i::safety {

void TrackerConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(Errc::kInvalidArgument, what);
  };
  require(ema_alpha > 0.0 && ema_alpha <= 1.0, "ema_alpha must lie in (0, 1]");
  require(fps > 0.0, "fps must be > 0");
  require(depth_window >= 2, "depth_window must hold at least two samples");
  require(track_ttl_frames > 0, "track_ttl_frames must be > 0");
  require(ego_speed_min_mps > 0.0, "ego_speed_min_mps must be > 0");
  require(closing_speed_eps_mps > 0.0, "closing_speed_eps_mps must be > 0");
  thresholds.validate();
}

Tracker::Tracker(TrackerConfig cfg, geo::CameraIntrinsics intr)
    : cfg_(cfg), intr_(intr) {
  cfg_.validate();
  intr_.validate();
}

void Tracker::observe(Track& track, const scene::Detection& det,
                      const scene::SceneFrame& frame) const {
  const bool has_history = !track.depth_samples.empty();
  const auto prev_point = track.camera_point;
  const auto prev_us = track.last_seen_us;

  track.object_class = det.object_class;
  track.depth_samples.push_back({frame.timestamp_us, det.depth_center_m});
  if (track.depth_samples.size() > cfg_.depth_window) {
    track.depth_samples.erase(track.depth_samples.begin());
  }
  track.smoothed_depth_m = smoothed_depth(track.depth_samples);

  if (track.depth_samples.size() >= 2) {
    const double raw_rate = anchor_range_rate(track.depth_samples);
    track.ema_range_rate_mps = ema(track.ema_range_rate_mps, raw_rate, cfg_.ema_alpha);
  }

  track.raw_ttc_s = track.ema_range_rate_mps
                        ? ttc(track.smoothed_depth_m, *track.ema_range_rate_mps,
                              cfg_.closing_speed_eps_mps)
                        : kInf;
  track.raw_thw_s = thw(track.smoothed_depth_m, frame.ego_speed_mps, cfg_.ego_speed_min_mps);
  track.ema_ttc_s = ema_metric_update(track.ema_ttc_s, track.raw_ttc_s, cfg_.ema_alpha);
  track.ema_thw_s = ema_metric_update(track.ema_thw_s, track.raw_thw_s, cfg_.ema_alpha);

  if (det.edges) {
    track.yaw_deg = yaw_from_depths(det.edges->top_m, det.edges->bottom_m,
                                    det.edges->left_m, det.edges->right_m);
  }
  track.orientation = orientation_class(track.yaw_deg);

  track.camera_point = geo::pixel_to_camera(det.bbox.center_u(), det.bbox.center_v(),
                                            det.depth_center_m, intr_);
  if (has_history && frame.timestamp_us > prev_us) {
    const double dt_s = static_cast<double>(frame.timestamp_us - prev_us) * 1e-6;
    const double vx = (track.camera_point.x - prev_point.x) / dt_s;
    const double vz = (track.camera_point.z - prev_point.z) / dt_s;
    track.approach_speed_mps = object_speed(vx, vz, track.camera_point);
  } else {
    track.approach_speed_mps = 0.0;
  }

  track.abs_speed_mps =
      absolute_speed(frame.ego_speed_mps, track.ema_range_rate_mps.value_or(0.0));
  track.state = classify(track.ema_ttc_s, track.ema_thw_s, cfg_.thresholds);
  track.last_seen_frame = frame.frame_index;
  track.last_seen_us = frame.timestamp_us;
}

SafetyReport Tracker::update(const scene::SceneFrame& frame) {
  if (last_ts_ && frame.timestamp_us <= *last_ts_) {
    throw Error(Errc::kStreamOrder, "frame " + std::to_string(frame.frame_index) +
                                        " timestamp " + std::to_string(frame.timestamp_us) +
                                        " not after " + std::to_string(*last_ts_));
  }
  frame.validate();
  last_ts_ = frame.timestamp_us;

  for (const auto& det : frame.detections) {
    auto [it, inserted] = tracks_.try_emplace(det.object_id);
    if (inserted) it->second.object_id = det.object_id;
    observe(it->second, det, frame);
  }

  for (auto it = tracks_.begin(); it != tracks_.end();) {
    const auto& t = it->second;
    const std::uint64_t age =
        frame.frame_index > t.last_seen_frame ? frame.frame_index - t.last_seen_frame : 0;
    if (age >= cfg_.track_ttl_frames) {
      it = tracks_.erase(it);
    } else {
      ++it;
    }
  }

  SafetyReport report;
  report.frame_index = frame.frame_index;
  report.timestamp_us = frame.timestamp_us;
  report.ego_speed_mps = frame.ego_speed_mps;
  for (const auto& [id, t] : tracks_) {
    ObjectReport o;
    o.object_id = id;
    o.object_class = t.object_class;
    o.distance_m = t.smoothed_depth_m;
    o.rel = t.camera_point;
    o.abs_speed_mps = t.abs_speed_mps;
    o.range_rate_mps = t.ema_range_rate_mps.value_or(0.0);
    o.approach_speed_mps = t.approach_speed_mps;
    o.yaw_deg = t.yaw_deg;
    o.orientation = t.orientation;
    o.ttc_s = t.ema_ttc_s;
    o.thw_s = t.ema_thw_s;
    o.state = t.state;
    o.stale = t.last_seen_frame != frame.frame_index;
    report.overall_state = worst(report.overall_state, o.state);
    report.objects.push_back(o);
  }
  return report;
}

}  // namespace v2i::safety
