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

#include "v2i/safety/expectation.hpp"

#include <algorithm>
#include <optional>

namespace v2i::safety {

FilterLag FilterLag::from(const TrackerConfig& cfg) {
  const double window = 0.5 * static_cast<double>(cfg.depth_window - 1);
  const double ema_stage = (1.0 - cfg.ema_alpha) / cfg.ema_alpha;
  FilterLag lag;
  lag.distance_frames = window;
  lag.closing_rate_frames = window + ema_stage;
  lag.ttc_frames = lag.distance_frames + ema_stage;
  lag.ttc_rate_frames = lag.closing_rate_frames + ema_stage;
  lag.thw_speed_frames = ema_stage;
  return lag;
}

std::vector<SafetyState> predicted_states(const scene::ScenarioSpec& spec,
                                          const TrackerConfig& cfg) {
  const auto frames = scene::generate_scenario(spec, geo::CameraIntrinsics{});
  const scene::ScenarioGenerator kin(spec, geo::CameraIntrinsics{});
  const FilterLag lag = FilterLag::from(cfg);
  const double dt = 1.0 / spec.fps;

  struct ActorTrack {
    std::optional<std::uint64_t> last_seen;
    double ttc = kInf;
    double thw = kInf;
    SafetyState state = SafetyState::kSafe;
  };
  std::vector<ActorTrack> tracks(spec.actors.size());
  std::vector<SafetyState> out;
  out.reserve(frames.size());

  for (const auto& frame : frames) {
    const double t = static_cast<double>(frame.frame_index) * dt;
    SafetyState overall = SafetyState::kSafe;
    for (std::size_t a = 0; a < spec.actors.size(); ++a) {
      const auto& actor = spec.actors[a];
      auto& tr = tracks[a];
      const bool visible = std::any_of(frame.detections.begin(), frame.detections.end(),
                                       [&](const auto& d) { return d.object_id == actor.id; });
      if (visible) {
        // Filters start when the actor first appears.
        auto at = [&](double frames_back) { return std::max(actor.enter_s, t - frames_back * dt); };
        const double gap = kin.gap_at(actor, at(lag.ttc_frames));
        const double t_rate = at(lag.ttc_rate_frames);
        const double closing = spec.ego_speed.speed_at(t_rate) - actor.speed.speed_at(t_rate);
        if (tr.last_seen && closing > cfg.closing_speed_eps_mps) tr.ttc = gap / closing;
        const double ego = spec.ego_speed.speed_at(at(lag.thw_speed_frames));
        if (ego >= cfg.ego_speed_min_mps) tr.thw = gap / ego;
        tr.state = classify(tr.ttc, tr.thw, cfg.thresholds);
        tr.last_seen = frame.frame_index;
      } else if (tr.last_seen && frame.frame_index - *tr.last_seen >= cfg.track_ttl_frames) {
        tr = ActorTrack{};
      }
      if (tr.last_seen) overall = worst(overall, tr.state);
    }
    out.push_back(overall);
  }
  return out;
}

std::vector<StateTransition> transitions(const std::vector<SafetyState>& states) {
  std::vector<StateTransition> out;
  for (std::size_t i = 1; i < states.size(); ++i) {
    if (states[i] != states[i - 1]) out.push_back({i, states[i - 1], states[i]});
  }
  return out;
}

std::vector<StateTransition> transitions(const std::vector<SafetyReport>& reports) {
  std::vector<StateTransition> out;
  for (std::size_t i = 1; i < reports.size(); ++i) {
    if (reports[i].overall_state != reports[i - 1].overall_state) {
      out.push_back({reports[i].frame_index, reports[i - 1].overall_state,
                     reports[i].overall_state});
    }
  }
  return out;
}

}  // namespace v2i::safety
