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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "generators.hpp"
#include "v2i/error.hpp"
#include "v2i/safety/metrics.hpp"

namespace v2i::safety {
namespace {

using v2i::testing::Gen;

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::kIo;
}

std::vector<DepthSample> ring_of(std::initializer_list<double> depths, std::uint64_t step_us) {
  std::vector<DepthSample> ring;
  std::uint64_t t = 0;
  for (double d : depths) {
    ring.push_back({t, d});
    t += step_us;
  }
  return ring;
}

TEST(SmoothedDepth, Examples) {
  EXPECT_DOUBLE_EQ(smoothed_depth(ring_of({5.0}, 50000)), 5.0);
  EXPECT_DOUBLE_EQ(smoothed_depth(ring_of({4.0, 5.0, 6.0}, 50000)), 5.0);
  EXPECT_EQ(code_of([] { smoothed_depth({}); }), Errc::kNoObservation);
}

TEST(SmoothedDepth, ArithmeticSeriesMean) {
  for (int w = 1; w <= 50; ++w) {
    std::vector<DepthSample> ring;
    for (int i = 1; i <= w; ++i) ring.push_back({static_cast<std::uint64_t>(i), double(i)});
    EXPECT_DOUBLE_EQ(smoothed_depth(ring), (w + 1) / 2.0) << "w=" << w;
  }
}

TEST(AnchorRangeRate, Examples) {
  EXPECT_DOUBLE_EQ(anchor_range_rate(ring_of({10.0, 9.0}, 1000000)), -1.0);
  EXPECT_DOUBLE_EQ(anchor_range_rate(ring_of({7.0, 7.0, 7.0}, 50000)), 0.0);
  EXPECT_NEAR(anchor_range_rate(ring_of({30.0, 29.8, 29.6, 29.4, 29.2}, 50000)), -4.0, 1e-12);
}

TEST(AnchorRangeRate, Errors) {
  EXPECT_EQ(code_of([] { anchor_range_rate(ring_of({1.0}, 1)); }), Errc::kNoVelocity);
  EXPECT_EQ(code_of([] { anchor_range_rate(ring_of({1.0, 2.0}, 0)); }), Errc::kNoVelocity);
}

TEST(Ema, Examples) {
  EXPECT_DOUBLE_EQ(ema(std::nullopt, 7.2, 0.3), 7.2);
  EXPECT_NEAR(ema(2.0, 3.0, 0.3), 2.3, 1e-15);
  EXPECT_DOUBLE_EQ(ema(123.0, -4.5, 1.0), -4.5);
}

TEST(EmaMetricUpdate, InfinityRules) {
  EXPECT_EQ(ema_metric_update(kInf, kInf, 0.3), kInf);
  EXPECT_EQ(ema_metric_update(4.0, kInf, 0.3), 4.0);
  EXPECT_EQ(ema_metric_update(kInf, 6.0, 0.3), 6.0);
  EXPECT_NEAR(ema_metric_update(2.0, 3.0, 0.3), 2.3, 1e-15);
}

TEST(ObjectSpeed, Examples) {
  EXPECT_DOUBLE_EQ(object_speed(0.0, -2.0, {0.0, 0.0, 10.0}), 2.0);
  EXPECT_DOUBLE_EQ(object_speed(0.0, 0.0, {3.0, 0.0, 10.0}), 0.0);
  EXPECT_DOUBLE_EQ(object_speed(-1.0, 0.0, {5.0, 0.0, 0.0}), 1.0);
  EXPECT_EQ(code_of([] { object_speed(1.0, 1.0, {0.0, 2.0, 0.0}); }), Errc::kDegenerateGeometry);
}

TEST(AbsoluteSpeed, Examples) {
  EXPECT_DOUBLE_EQ(absolute_speed(8.0, 0.0), 8.0);
  EXPECT_DOUBLE_EQ(absolute_speed(8.0, -8.0), 0.0);
  EXPECT_DOUBLE_EQ(absolute_speed(0.0, 3.0), 3.0);
  EXPECT_DOUBLE_EQ(absolute_speed(2.0, -5.0), 0.0);
}

TEST(YawFromDepths, Examples) {
  // Δh = right - left = -0.5, Δv = bottom - top = 0.2
  EXPECT_EQ(yaw_from_depths(10.0, 10.2, 10.5, 10.0), 0.0);
  // Δv = 0.3, Δh = 0.1
  EXPECT_EQ(yaw_from_depths(10.0, 10.3, 10.0, 10.1), 270.0);
  // |Δv| = |Δh| = 0.25, Δv < 0: vertical branch wins the tie.
  EXPECT_EQ(yaw_from_depths(10.25, 10.0, 10.0, 10.25), 90.0);
  EXPECT_EQ(yaw_from_depths(10.0, 10.0, 10.0, 10.5), 180.0);
}

TEST(YawFromDepths, RejectsNonPositiveDepth) {
  EXPECT_EQ(code_of([] { yaw_from_depths(0.0, 1.0, 1.0, 1.0); }), Errc::kInvalidDepthSample);
  EXPECT_EQ(code_of([] { yaw_from_depths(1.0, 1.0, -1.0, 1.0); }), Errc::kInvalidDepthSample);
}

TEST(OrientationClass, Examples) {
  EXPECT_EQ(orientation_class(0.0), Orientation::kParallel);
  EXPECT_EQ(orientation_class(180.0), Orientation::kParallel);
  EXPECT_EQ(orientation_class(90.0), Orientation::kPerpendicular);
  EXPECT_EQ(orientation_class(270.0), Orientation::kPerpendicular);
  EXPECT_EQ(code_of([] { orientation_class(45.0); }), Errc::kInvalidYaw);
}

TEST(Ttc, Examples) {
  EXPECT_DOUBLE_EQ(ttc(20.0, -4.0, 0.05), 5.0);
  EXPECT_EQ(ttc(20.0, 2.0, 0.05), kInf);
  EXPECT_EQ(ttc(20.0, -0.01, 0.05), kInf);
  EXPECT_EQ(ttc(20.0, -0.05, 0.05), kInf);
}

TEST(Thw, Examples) {
  EXPECT_DOUBLE_EQ(thw(15.0, 10.0, 0.1), 1.5);
  EXPECT_EQ(thw(15.0, 0.05, 0.1), kInf);
  EXPECT_DOUBLE_EQ(thw(15.0, 0.1, 0.1), 150.0);
}

TEST(Classify, Examples) {
  const SafetyThresholds t;
  EXPECT_EQ(classify(kInf, kInf, t), SafetyState::kSafe);
  EXPECT_EQ(classify(2.0, kInf, t), SafetyState::kHazardous);
  EXPECT_EQ(classify(1.0, kInf, t), SafetyState::kDangerous);
  EXPECT_EQ(classify(kInf, 0.7, t), SafetyState::kHazardous);
  EXPECT_EQ(classify(kInf, 0.4, t), SafetyState::kDangerous);
  EXPECT_EQ(classify(3.0, 1.0, t), SafetyState::kSafe);
  EXPECT_EQ(classify(1.5, kInf, t), SafetyState::kHazardous);
}

TEST(ClassifyProperty, MonotoneInBothMetrics) {
  Gen gen(21);
  const SafetyThresholds t;
  for (int n = 0; n < 2000; ++n) {
    const double a = gen.log_uniform(0.01, 100.0);
    const double b = gen.log_uniform(0.01, 100.0);
    const double h = gen.log_uniform(0.01, 100.0);
    const auto lo = static_cast<int>(classify(std::min(a, b), h, t));
    const auto hi = static_cast<int>(classify(std::max(a, b), h, t));
    ASSERT_GE(lo, hi);
    ASSERT_GE(static_cast<int>(classify(h, std::min(a, b), t)),
              static_cast<int>(classify(h, std::max(a, b), t)));
  }
}

TEST(FormatMetric, Examples) {
  EXPECT_EQ(format_metric(3.42), "3.4s");
  EXPECT_EQ(format_metric(kInf), "inf");
  EXPECT_EQ(format_metric(0.05), "0.1s");
  EXPECT_EQ(format_metric(3.75), "3.8s");
  EXPECT_EQ(format_metric(12.0), "12.0s");
}

TEST(Worst, PicksMoreSevere) {
  EXPECT_EQ(worst(SafetyState::kSafe, SafetyState::kHazardous), SafetyState::kHazardous);
  EXPECT_EQ(worst(SafetyState::kDangerous, SafetyState::kHazardous), SafetyState::kDangerous);
  EXPECT_EQ(worst(SafetyState::kSafe, SafetyState::kSafe), SafetyState::kSafe);
}

TEST(StateNames, RoundTrip) {
  for (auto s : {SafetyState::kSafe, SafetyState::kHazardous, SafetyState::kDangerous}) {
    EXPECT_EQ(safety_state_from_string(to_string(s)), s);
  }
  EXPECT_FALSE(safety_state_from_string("safe"));
}

}  // namespace
}  // namespace v2i::safety
