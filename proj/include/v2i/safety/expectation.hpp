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

#ifndef V2I_SAFETY_EXPECTATION_HPP_
#define V2I_SAFETY_EXPECTATION_HPP_

#include <cstdint>
#include <vector>

#include "v2i/safety/metrics.hpp"
#include "v2i/safety/tracker.hpp"
#include "v2i/scene/scenario.hpp"

namespace v2i::safety {

// Steady-state group delay, in frames, of each filtered metric relative to
// the true kinematics. A window mean of w samples lags (w-1)/2 frames and an
// EMA stage lags (1-alpha)/alpha frames.
struct FilterLag {
  double distance_frames = 0.0;      // smoothed depth
  double closing_rate_frames = 0.0;  // EMA of the anchor rate
  double ttc_frames = 0.0;           // distance lag + one EMA stage
  double ttc_rate_frames = 0.0;      // closing-rate lag + one EMA stage
  double thw_speed_frames = 0.0;     // one EMA stage

  static FilterLag from(const TrackerConfig& cfg);
};

struct StateTransition {
  std::uint64_t frame_index = 0;
  SafetyState from = SafetyState::kSafe;
  SafetyState to = SafetyState::kSafe;
};

// Overall state per frame predicted from the scenario's closed-form gap and
// closing speed, shifted by the filter lag, including the hold-last-value
// and track-expiry behaviour of the tracker.
std::vector<SafetyState> predicted_states(const scene::ScenarioSpec& spec,
                                          const TrackerConfig& cfg);

std::vector<StateTransition> transitions(const std::vector<SafetyState>& states);
std::vector<StateTransition> transitions(const std::vector<SafetyReport>& reports);

}  // namespace v2i::safety

#endif  // V2I_SAFETY_EXPECTATION_HPP_
