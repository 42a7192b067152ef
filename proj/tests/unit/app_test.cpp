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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>

#include "v2i/app/config.hpp"
#include "v2i/app/display.hpp"
#include "v2i/app/report_log.hpp"
#include "v2i/error.hpp"

namespace v2i::app {
namespace {

using safety::SafetyState;
constexpr std::uint64_t kSec = 1'000'000;

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::kIo;
}

wire::OperatorMessage op(wire::Severity sev, wire::StateOverride ovr, std::string text = "x") {
  wire::OperatorMessage m;
  m.severity = sev;
  m.state_override = ovr;
  m.text = std::move(text);
  return m;
}

TEST(Display, LocalStateWithoutOperator) {
  OnboardDisplayState d;
  d.set_local(SafetyState::kHazardous);
  const auto v = d.view(0);
  EXPECT_EQ(v.effective, SafetyState::kHazardous);
  EXPECT_FALSE(v.operator_text);
  EXPECT_FALSE(v.active_override);
}

TEST(Display, OverrideRaisesStateForTenSeconds) {
  OnboardDisplayState d;
  d.apply_operator(op(wire::Severity::kWarning, wire::StateOverride::kDangerous), 5 * kSec);
  EXPECT_EQ(d.effective(5 * kSec), SafetyState::kDangerous);
  EXPECT_EQ(d.effective(15 * kSec - 1), SafetyState::kDangerous);
  EXPECT_EQ(d.effective(15 * kSec), SafetyState::kSafe);
  // Text stays visible after the override lapses.
  const auto v = d.view(20 * kSec);
  ASSERT_TRUE(v.operator_text);
  EXPECT_EQ(v.operator_age_ms, 15000U);
}

TEST(Display, OverrideNeverLowersLocalState) {
  OnboardDisplayState d;
  d.set_local(SafetyState::kDangerous);
  d.apply_operator(op(wire::Severity::kInfo, wire::StateOverride::kSafe), 0);
  EXPECT_EQ(d.effective(kSec), SafetyState::kDangerous);
}

TEST(Display, RecallWithoutOverrideIsDangerous) {
  OnboardDisplayState d;
  d.apply_operator(op(wire::Severity::kRecall, wire::StateOverride::kNone), 0);
  EXPECT_EQ(d.effective(kSec), SafetyState::kDangerous);
  d.apply_operator(op(wire::Severity::kInfo, wire::StateOverride::kNone), 2 * kSec);
  EXPECT_EQ(d.effective(3 * kSec), SafetyState::kSafe);
}

TEST(Display, EffectiveIsWorstOfBothProperty) {
  const SafetyState all[] = {SafetyState::kSafe, SafetyState::kHazardous, SafetyState::kDangerous};
  const wire::StateOverride ovr[] = {wire::StateOverride::kNone, wire::StateOverride::kSafe,
                                     wire::StateOverride::kHazardous, wire::StateOverride::kDangerous};
  for (auto local : all) {
    for (auto o : ovr) {
      OnboardDisplayState d;
      d.set_local(local);
      d.apply_operator(op(wire::Severity::kWarning, o), 0);
      const auto eff = d.effective(kSec);
      EXPECT_EQ(safety::worst(eff, local), eff);
      if (auto s = wire::to_safety_state(o)) EXPECT_EQ(eff, safety::worst(local, *s));
    }
  }
}

TEST(Display, DashboardLine) {
  safety::SafetyReport r;
  r.frame_index = 12;
  r.ego_speed_mps = 8.0;
  safety::ObjectReport o;
  o.object_id = 3;
  o.distance_m = 21.04;
  o.thw_s = 2.63;
  r.objects.push_back(o);
  OnboardDisplayState d;
  d.apply_operator(op(wire::Severity::kWarning, wire::StateOverride::kHazardous, "slow down"), 0);
  const auto line = render_dashboard_line(r, d.view(2 * kSec), false);
  EXPECT_NE(line.find("HAZARDOUS"), std::string::npos) << line;
  EXPECT_NE(line.find("#3 Car 21.0m ttc inf thw 2.6s"), std::string::npos) << line;
  EXPECT_NE(line.find("OPERATOR WARNING 2s: slow down"), std::string::npos) << line;
  EXPECT_EQ(line.find('\x1b'), std::string::npos);
  EXPECT_NE(render_dashboard_line(r, d.view(0), true).find('\x1b'), std::string::npos);
}

safety::SafetyReport sample_report() {
  safety::SafetyReport r;
  r.frame_index = 7;
  r.timestamp_us = 350000;
  r.ego_speed_mps = 8.5;
  r.overall_state = SafetyState::kHazardous;
  safety::ObjectReport a;
  a.object_id = 1;
  a.distance_m = 12.25;
  a.rel = {0.5, -0.25, 12.25};
  a.abs_speed_mps = 4.0;
  a.range_rate_mps = -4.5;
  a.approach_speed_mps = 4.5;
  a.yaw_deg = 90.0;
  a.orientation = safety::Orientation::kPerpendicular;
  a.ttc_s = 2.7222222222222223;
  a.thw_s = 1.4411764705882353;
  a.state = SafetyState::kHazardous;
  safety::ObjectReport b;
  b.object_id = 4;
  b.object_class = scene::ObjectClass::kPedestrian;
  b.distance_m = 30.0;
  b.stale = true;
  r.objects = {a, b};
  return r;
}

void expect_same(const safety::SafetyReport& x, const safety::SafetyReport& y) {
  EXPECT_EQ(x.frame_index, y.frame_index);
  EXPECT_EQ(x.timestamp_us, y.timestamp_us);
  EXPECT_EQ(x.ego_speed_mps, y.ego_speed_mps);
  EXPECT_EQ(x.overall_state, y.overall_state);
  ASSERT_EQ(x.objects.size(), y.objects.size());
  for (std::size_t i = 0; i < x.objects.size(); ++i) {
    const auto& a = x.objects[i];
    const auto& b = y.objects[i];
    EXPECT_EQ(a.object_id, b.object_id);
    EXPECT_EQ(a.object_class, b.object_class);
    EXPECT_EQ(a.distance_m, b.distance_m);
    EXPECT_EQ(a.rel.x, b.rel.x);
    EXPECT_EQ(a.rel.y, b.rel.y);
    EXPECT_EQ(a.rel.z, b.rel.z);
    EXPECT_EQ(a.abs_speed_mps, b.abs_speed_mps);
    EXPECT_EQ(a.range_rate_mps, b.range_rate_mps);
    EXPECT_EQ(a.approach_speed_mps, b.approach_speed_mps);
    EXPECT_EQ(a.yaw_deg, b.yaw_deg);
    EXPECT_EQ(a.orientation, b.orientation);
    EXPECT_EQ(a.ttc_s, b.ttc_s);
    EXPECT_EQ(a.thw_s, b.thw_s);
    EXPECT_EQ(a.state, b.state);
    EXPECT_EQ(a.stale, b.stale);
  }
}

TEST(ReportLog, LineRoundTripsExactly) {
  const auto r = sample_report();
  const auto line = report_to_json_line(r, SafetyState::kDangerous);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  EXPECT_NE(line.find("\"effective_state\":\"Dangerous\""), std::string::npos);
  expect_same(parse_report_line(line, 1), r);
}

TEST(ReportLog, InfiniteMetricsAreNull) {
  const auto line = report_to_json_line(sample_report());
  EXPECT_NE(line.find("\"ttc_s\":null"), std::string::npos) << line;
  EXPECT_NE(line.find("\"ttc\":\"inf\""), std::string::npos) << line;
  const auto back = parse_report_line(line, 1);
  EXPECT_TRUE(std::isinf(back.objects[1].ttc_s));
  EXPECT_TRUE(std::isinf(back.objects[1].thw_s));
}

TEST(ReportLog, BadLinesCarryLineNumber) {
  for (const char* bad : {"{", "[]", R"({"schema":2})", R"({"schema":1,"frame_index":0})"}) {
    try {
      parse_report_line(bad, 9);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::kParseError) << bad;
      EXPECT_EQ(e.position(), 9U) << bad;
    }
  }
}

TEST(ReportLog, WriterAndReader) {
  const auto path = std::filesystem::temp_directory_path() / "v2i_report_log_test.jsonl";
  {
    ReportLogWriter w(path);
    auto r = sample_report();
    for (std::uint64_t n = 0; n < 5; ++n) {
      r.frame_index = n;
      w.write(r);
      w.flush();
    }
  }
  const auto back = read_report_log(path);
  ASSERT_EQ(back.size(), 5U);
  EXPECT_EQ(back[4].frame_index, 4U);
  std::filesystem::remove(path);
  EXPECT_EQ(code_of([&] { read_report_log(path); }), Errc::kIo);
}

TEST(MakeTelemetry, SkipsStaleAndNarrowsToFloat) {
  scene::SceneFrame f;
  f.ego_lat = 30.5;
  f.ego_lon = 31.25;
  f.ego_yaw_deg = 90.0;
  f.ego_speed_mps = 8.5;
  const auto r = sample_report();
  const auto m = make_telemetry(f, r, 17, 123456);
  EXPECT_EQ(m.header.seq, 17U);
  EXPECT_EQ(m.header.timestamp_us, 123456U);
  EXPECT_EQ(m.ego_lat, 30.5);
  EXPECT_EQ(m.ego_speed_mps, 8.5F);
  EXPECT_EQ(m.overall_state, SafetyState::kHazardous);
  ASSERT_EQ(m.objects.size(), 1U);
  const auto& o = m.objects[0];
  EXPECT_EQ(o.id, 1U);
  EXPECT_EQ(o.rel_y, -0.25F);
  EXPECT_EQ(o.ttc_s, static_cast<float>(r.objects[0].ttc_s));
  EXPECT_EQ(o.yaw_deg, 90.0F);
  EXPECT_EQ(o.state, SafetyState::kHazardous);
}

TEST(MakeTelemetry, InfinityStaysInfinity) {
  auto r = sample_report();
  r.objects[1].stale = false;
  const auto m = make_telemetry({}, r, 0, 0);
  ASSERT_EQ(m.objects.size(), 2U);
  EXPECT_TRUE(std::isinf(m.objects[1].ttc_s));
  EXPECT_GT(m.objects[1].ttc_s, 0.0F);
}

TEST(Config, EmptyDocumentKeepsDefaults) {
  const auto a = parse_agent_config("{}");
  EXPECT_EQ(a.twin.port, 47000);
  EXPECT_EQ(a.send_every, 1U);
  EXPECT_EQ(a.tracker.track_ttl_frames, 10U);
  const auto s = parse_server_config("{}");
  EXPECT_EQ(s.twin.entity_ttl_ms, 1000U);
  EXPECT_EQ(s.push_hz, 10.0);
  EXPECT_EQ(s.alert_queue_depth, 8U);
}

TEST(Config, ShippedDefaultFileLoads) {
  const std::filesystem::path path = std::filesystem::path(V2I_SOURCE_DIR) / "config" / "default.json";
  const auto a = load_agent_config(path);
  EXPECT_EQ(a.intrinsics.focal_px, 350.0);
  EXPECT_EQ(a.intrinsics.tilt_deg, 15.0);
  EXPECT_EQ(a.session.missed_heartbeats, 5U);
  const auto s = load_server_config(path);
  EXPECT_EQ(s.twin.origin.lat0, 30.0);
  EXPECT_EQ(s.twin.offset_sign, geo::OffsetSign::kSubtract);
  EXPECT_FALSE(s.auto_override);
}

TEST(Config, SectionsOverrideDefaults) {
  const auto a = parse_agent_config(R"({
    "tracker": {"ema_alpha": 0.5},
    "thresholds": {"ttc_hazard_s": 4.0},
    "agent": {"source": "scenario:x.json", "twin": "10.0.0.2:5000", "send_every": 2,
              "loopback": true, "channel": "cellular:3", "linger_ms": 250}
  })");
  EXPECT_EQ(a.tracker.ema_alpha, 0.5);
  EXPECT_EQ(a.tracker.thresholds.ttc_hazard_s, 4.0);
  ASSERT_TRUE(a.source);
  EXPECT_EQ(a.source->kind, SourceKind::kScenario);
  EXPECT_EQ(a.source->path, "x.json");
  EXPECT_EQ(a.twin, (wire::Endpoint{"10.0.0.2", 5000}));
  EXPECT_EQ(a.send_every, 2U);
  EXPECT_TRUE(a.loopback);
  EXPECT_EQ(a.linger.count(), 250);
  const auto s = parse_server_config(R"({"server": {"offset_sign": "add", "entity_ttl_ms": 500}})");
  EXPECT_EQ(s.twin.offset_sign, geo::OffsetSign::kAdd);
  EXPECT_EQ(s.twin.entity_ttl_ms, 500U);
}

TEST(Config, ErrorsAreConfigErrors) {
  for (const char* bad : {"", "[1]", "{", R"({"tracker": {"ema_alpha": "x"}})",
                          R"({"tracker": {"ema_alpha": 0}})",
                          R"({"agent": {"send_every": 0}})",
                          R"({"agent": {"source": "file:x"}})",
                          R"({"agent": {"twin": "nope"}})"}) {
    EXPECT_EQ(code_of([&] { parse_agent_config(bad); }), Errc::kConfig) << bad;
  }
  for (const char* bad : {R"({"server": {"offset_sign": "mul"}})",
                          R"({"server": {"push_hz": 0}})",
                          R"({"server": {"alert_queue_depth": 0}})"}) {
    EXPECT_EQ(code_of([&] { parse_server_config(bad); }), Errc::kConfig) << bad;
  }
  EXPECT_EQ(code_of([] { load_agent_config("/nonexistent/v2i.json"); }), Errc::kConfig);
}

TEST(Config, SourceSpec) {
  EXPECT_EQ(SourceSpec::parse("log:/tmp/a.jsonl").kind, SourceKind::kLog);
  EXPECT_EQ(SourceSpec::parse("log:/tmp/a.jsonl").path, "/tmp/a.jsonl");
  for (const char* bad : {"", "log", "log:", "scenario", "x:y"}) {
    EXPECT_EQ(code_of([&] { SourceSpec::parse(bad); }), Errc::kConfig) << bad;
  }
}

TEST(Config, ParseOrigin) {
  const auto o = parse_origin("30.0444,31.2357");
  EXPECT_EQ(o.lat0, 30.0444);
  EXPECT_EQ(o.lon0, 31.2357);
  EXPECT_EQ(parse_origin(" -12.5 , 7 ").lat0, -12.5);
  for (const char* bad : {"", "30", "30,", "a,b", "91,0", "0,181", "1,2,3"}) {
    EXPECT_EQ(code_of([&] { parse_origin(bad); }), Errc::kConfig) << bad;
  }
}

}  // namespace
}  // namespace v2i::app
