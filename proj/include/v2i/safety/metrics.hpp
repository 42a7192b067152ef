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

#ifndef V2I_SAFETY_METRICS_HPP_
#define V2I_SAFETY_METRICS_HPP_

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "v2i/geometry/geometry.hpp"

namespace v2i::safety {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Ordered by severity; numeric values match the wire encoding.
enum class SafetyState : std::uint8_t { kSafe = 0, kHazardous = 1, kDangerous = 2 };

std::string_view to_string(SafetyState s);
std::optional<SafetyState> safety_state_from_string(std::string_view s);
SafetyState worst(SafetyState a, SafetyState b);

enum class Orientation { kParallel, kPerpendicular };

std::string_view to_string(Orientation o);

struct SafetyThresholds {
  double ttc_hazard_s = 3.0;
  double ttc_danger_s = 1.5;
  double thw_hazard_s = 1.0;
  double thw_danger_s = 0.5;

  void validate() const;
};

struct DepthSample {
  std::uint64_t timestamp_us = 0;
  double depth_m = 0.0;

  bool operator==(const DepthSample&) const = default;
};

// Mean of the window. Throws Errc::kNoObservation on an empty window.
double smoothed_depth(std::span<const DepthSample> ring);

// Signed range rate between the oldest and newest sample of the window;
// negative when the object is closing. Throws Errc::kNoVelocity when fewer
// than two samples or no elapsed time.
double anchor_range_rate(std::span<const DepthSample> ring);

double ema(std::optional<double> prev, double raw, double alpha);

// EMA over a metric that may be +inf. An infinite raw value keeps the
// previous average; the first finite value after an all-infinite history
// seeds the average.
double ema_metric_update(double prev_ema, double raw, double alpha);

// Line-of-sight approach speed from the planar velocity (vx, vz) of an object
// at camera position `point`; positive when closing.
double object_speed(double vx_mps, double vz_mps, const geo::CameraPoint& point);

// In-lane absolute speed: ego speed plus range rate, floored at 0.
double absolute_speed(double ego_speed_mps, double range_rate_mps);

// Discrete yaw from the four edge depth samples. Ties between the vertical
// and horizontal differences take the vertical branch.
double yaw_from_depths(double d_top, double d_bottom, double d_left, double d_right);

Orientation orientation_class(double yaw_deg);

double ttc(double distance_m, double range_rate_mps, double eps_mps);
double thw(double distance_m, double ego_speed_mps, double min_speed_mps);

SafetyState classify(double ttc_s, double thw_s, const SafetyThresholds& t);

// "3.4s" for finite values (one decimal, half rounds up), "inf" otherwise.
std::string format_metric(double seconds);

}  // namespace v2i::safety

#endif  // V2I_SAFETY_METRICS_HPP_
