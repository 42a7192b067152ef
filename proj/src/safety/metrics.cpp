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

#include "v2i/safety/metrics.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>

#include "v2i/error.hpp"

namespace v2i::safety {

namespace {

void require(bool condition, const char* what) {
  if (!condition) throw Error(Errc::kInvalidArgument, what);
}

bool positive_or_inf(double v) { return v > 0.0 && !std::isnan(v); }

}  // namespace

std::string_view to_string(SafetyState s) {
  switch (s) {
    case SafetyState::kSafe: return "Safe";
    case SafetyState::kHazardous: return "Hazardous";
    case SafetyState::kDangerous: return "Dangerous";
  }
  return "Unknown";
}

std::optional<SafetyState> safety_state_from_string(std::string_view s) {
  if (s == "Safe") return SafetyState::kSafe;
  if (s == "Hazardous") return SafetyState::kHazardous;
  if (s == "Dangerous") return SafetyState::kDangerous;
  return std::nullopt;
}

SafetyState worst(SafetyState a, SafetyState b) {
  return static_cast<std::uint8_t>(a) >= static_cast<std::uint8_t>(b) ? a : b;
}

std::string_view to_string(Orientation o) {
  return o == Orientation::kParallel ? "parallel" : "perpendicular";
}

void SafetyThresholds::validate() const {
  require(ttc_danger_s > 0.0 && thw_danger_s > 0.0, "thresholds must be positive");
  require(ttc_danger_s < ttc_hazard_s, "ttc_danger_s must be < ttc_hazard_s");
  require(thw_danger_s < thw_hazard_s, "thw_danger_s must be < thw_hazard_s");
}

double smoothed_depth(std::span<const DepthSample> ring) {
  if (ring.empty()) throw Error(Errc::kNoObservation, "empty depth window");
  double sum = 0.0;
  for (const auto& s : ring) sum += s.depth_m;
  return sum / static_cast<double>(ring.size());
}

double anchor_range_rate(std::span<const DepthSample> ring) {
  if (ring.size() < 2) throw Error(Errc::kNoVelocity, "fewer than two depth samples");
  const auto& oldest = ring.front();
  const auto& newest = ring.back();
  if (newest.timestamp_us <= oldest.timestamp_us) {
    throw Error(Errc::kNoVelocity, "no elapsed time across the window");
  }
  const double dt_s = static_cast<double>(newest.timestamp_us - oldest.timestamp_us) * 1e-6;
  return (newest.depth_m - oldest.depth_m) / dt_s;
}

double ema(std::optional<double> prev, double raw, double alpha) {
  require(std::isfinite(raw), "ema input must be finite");
  require(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
  if (!prev) return raw;
  return alpha * raw + (1.0 - alpha) * *prev;
}

double ema_metric_update(double prev_ema, double raw, double alpha) {
  if (!std::isfinite(raw)) return prev_ema;
  return ema(std::isfinite(prev_ema) ? std::optional<double>(prev_ema) : std::nullopt,
             raw, alpha);
}

double object_speed(double vx_mps, double vz_mps, const geo::CameraPoint& point) {
  const double range = std::sqrt(point.x * point.x + point.z * point.z);
  if (!(range > 0.0)) {
    throw Error(Errc::kDegenerateGeometry, "object at the camera origin");
  }
  return -(vx_mps * point.x + vz_mps * point.z) / range;
}

double absolute_speed(double ego_speed_mps, double range_rate_mps) {
  const double v = ego_speed_mps + range_rate_mps;
  return v > 0.0 ? v : 0.0;
}

double yaw_from_depths(double d_top, double d_bottom, double d_left, double d_right) {
  for (double d : {d_top, d_bottom, d_left, d_right}) {
    if (!std::isfinite(d) || d <= 0.0) {
      throw Error(Errc::kInvalidDepthSample, "edge depth " + std::to_string(d));
    }
  }
  const double dv = d_bottom - d_top;
  const double dh = d_right - d_left;
  if (std::abs(dh) > std::abs(dv)) {
    return dh < 0.0 ? 0.0 : 180.0;
  }
  return dv < 0.0 ? 90.0 : 270.0;
}

Orientation orientation_class(double yaw_deg) {
  if (yaw_deg == 0.0 || yaw_deg == 180.0) return Orientation::kParallel;
  if (yaw_deg == 90.0 || yaw_deg == 270.0) return Orientation::kPerpendicular;
  throw Error(Errc::kInvalidYaw, "yaw " + std::to_string(yaw_deg) + " deg");
}

double ttc(double distance_m, double range_rate_mps, double eps_mps) {
  require(distance_m > 0.0, "distance must be > 0");
  if (range_rate_mps < -eps_mps) return distance_m / -range_rate_mps;
  return kInf;
}

double thw(double distance_m, double ego_speed_mps, double min_speed_mps) {
  require(distance_m > 0.0, "distance must be > 0");
  if (ego_speed_mps >= min_speed_mps) return distance_m / ego_speed_mps;
  return kInf;
}

SafetyState classify(double ttc_s, double thw_s, const SafetyThresholds& t) {
  require(positive_or_inf(ttc_s) && positive_or_inf(thw_s),
          "metrics must be positive or infinite");
  if (ttc_s < t.ttc_danger_s || thw_s < t.thw_danger_s) return SafetyState::kDangerous;
  if (ttc_s < t.ttc_hazard_s || thw_s < t.thw_hazard_s) return SafetyState::kHazardous;
  return SafetyState::kSafe;
}

std::string format_metric(double seconds) {
  if (!std::isfinite(seconds)) return "inf";
  const double tenths = std::floor(seconds * 10.0 + 0.5);
  if (std::abs(tenths) < 9.0e15) {
    // Integer tenths avoid the binary-representation bias of "%.1f".
    const auto t = static_cast<std::int64_t>(tenths);
    const auto mag = t < 0 ? -t : t;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%" PRId64 ".%" PRId64 "s", t < 0 ? "-" : "",
                  mag / 10, mag % 10);
    return buf;
  }
  char buf[400];
  std::snprintf(buf, sizeof buf, "%.1fs", seconds);
  return buf;
}

}  // namespace v2i::safety
