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

#ifndef V2I_TESTS_SUPPORT_GENERATORS_HPP_
#define V2I_TESTS_SUPPORT_GENERATORS_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "v2i/wire/messages.hpp"

namespace v2i::testing {

// Seeded generator with the handful of draws the property tests need.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  // Log-uniform magnitude, for inputs spanning many decades.
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  std::uint32_t u32() { return static_cast<std::uint32_t>(rng_()); }
  std::uint64_t u64() { return rng_(); }
  bool chance(double p) { return uniform(0.0, 1.0) < p; }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(integer(0, static_cast<std::int64_t>(v.size()) - 1))];
  }
  std::mt19937_64& engine() { return rng_; }

  float finite_float(float lo, float hi) { return static_cast<float>(uniform(lo, hi)); }

  // Valid UTF-8 mixing 1- to 4-byte sequences, at most `max_bytes` long.
  std::string utf8_text(std::size_t max_bytes) {
    std::string s;
    const auto target = static_cast<std::size_t>(integer(0, static_cast<std::int64_t>(max_bytes)));
    while (true) {
      std::string cp;
      switch (integer(0, 3)) {
        case 0: cp = std::string(1, static_cast<char>(integer(0x20, 0x7E))); break;
        case 1: cp = "\xC3\xA9"; break;              // é
        case 2: cp = "\xE2\x9A\xA0"; break;          // ⚠
        default: cp = "\xF0\x9F\x9A\x97"; break;     // 🚗
      }
      if (s.size() + cp.size() > target) break;
      s += cp;
    }
    return s;
  }

  wire::MessageHeader header() { return {u32(), u64()}; }

  wire::ObjectRecord object_record() {
    wire::ObjectRecord r;
    r.id = u32();
    r.object_class = chance(0.5) ? scene::ObjectClass::kCar : scene::ObjectClass::kPedestrian;
    r.rel_x = finite_float(-100.0F, 100.0F);
    r.rel_y = finite_float(-10.0F, 10.0F);
    r.rel_z = finite_float(0.1F, 200.0F);
    r.abs_speed_mps = finite_float(0.0F, 60.0F);
    r.yaw_deg = static_cast<float>(90 * integer(0, 3));
    r.ttc_s = chance(0.2) ? std::numeric_limits<float>::infinity() : finite_float(0.01F, 100.0F);
    r.thw_s = chance(0.2) ? std::numeric_limits<float>::infinity() : finite_float(0.01F, 100.0F);
    r.state = static_cast<safety::SafetyState>(integer(0, 2));
    return r;
  }

  wire::TelemetryMessage telemetry(std::size_t max_objects = 32) {
    wire::TelemetryMessage m;
    m.header = header();
    m.ego_lat = uniform(-90.0, 90.0);
    m.ego_lon = uniform(-180.0, 180.0);
    m.ego_yaw_deg = finite_float(0.0F, 360.0F);
    m.ego_speed_mps = finite_float(0.0F, 60.0F);
    m.overall_state = static_cast<safety::SafetyState>(integer(0, 2));
    const auto n = integer(0, static_cast<std::int64_t>(max_objects));
    for (std::int64_t i = 0; i < n; ++i) m.objects.push_back(object_record());
    return m;
  }

  wire::OperatorMessage operator_message() {
    wire::OperatorMessage m;
    m.header = header();
    m.severity = static_cast<wire::Severity>(integer(0, 2));
    m.state_override = static_cast<wire::StateOverride>(integer(0, 3));
    m.text = utf8_text(wire::kMaxTextBytes);
    return m;
  }

  wire::AckMessage ack() { return {header(), u32(), u64()}; }

  // Any of the five message types, uniformly.
  wire::Message message() {
    switch (integer(0, 4)) {
      case 0: return telemetry();
      case 1: return operator_message();
      case 2: return wire::HelloMessage{header()};
      case 3: return wire::HeartbeatMessage{header()};
      default: return ack();
    }
  }

 private:
  std::mt19937_64 rng_;
};

// Relative closeness with an absolute floor for values near zero.
inline bool close_rel(double a, double b, double rel, double abs_floor = 1e-12) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::fabs(a - b) <= std::max(abs_floor, rel * std::max(std::fabs(a), std::fabs(b)));
}

}  // namespace v2i::testing

#endif  // V2I_TESTS_SUPPORT_GENERATORS_HPP_
