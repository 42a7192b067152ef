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

#include "v2i/app/report_log.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <json.hpp>

#include "v2i/error.hpp"

namespace v2i::app {
namespace {

using nlohmann::ordered_json;

ordered_json seconds_or_null(double s) {
  if (std::isfinite(s)) return s;
  return nullptr;
}

double seconds_from(const ordered_json& j) {
  return j.is_null() ? safety::kInf : j.get<double>();
}

float to_wire_seconds(double s) {
  if (!std::isfinite(s)) return std::numeric_limits<float>::infinity();
  return std::max(static_cast<float>(s), std::numeric_limits<float>::min());
}

}  // namespace

std::string report_to_json_line(const safety::SafetyReport& r,
                                std::optional<safety::SafetyState> effective) {
  ordered_json j;
  j["schema"] = kReportSchemaVersion;
  j["frame_index"] = r.frame_index;
  j["timestamp_us"] = r.timestamp_us;
  j["ego_speed_mps"] = r.ego_speed_mps;
  j["overall_state"] = safety::to_string(r.overall_state);
  if (effective) j["effective_state"] = safety::to_string(*effective);
  auto objects = ordered_json::array();
  for (const auto& o : r.objects) {
    ordered_json jo;
    jo["object_id"] = o.object_id;
    jo["class"] = scene::to_string(o.object_class);
    jo["distance_m"] = o.distance_m;
    jo["rel"] = {o.rel.x, o.rel.y, o.rel.z};
    jo["abs_speed_mps"] = o.abs_speed_mps;
    jo["range_rate_mps"] = o.range_rate_mps;
    jo["approach_speed_mps"] = o.approach_speed_mps;
    jo["yaw_deg"] = o.yaw_deg;
    jo["orientation"] = safety::to_string(o.orientation);
    jo["ttc_s"] = seconds_or_null(o.ttc_s);
    jo["thw_s"] = seconds_or_null(o.thw_s);
    jo["ttc"] = safety::format_metric(o.ttc_s);
    jo["thw"] = safety::format_metric(o.thw_s);
    jo["state"] = safety::to_string(o.state);
    jo["stale"] = o.stale;
    objects.push_back(std::move(jo));
  }
  j["objects"] = std::move(objects);
  return j.dump();
}

safety::SafetyReport parse_report_line(const std::string& line, std::size_t line_no) {
  try {
    const auto j = ordered_json::parse(line);
    if (j.at("schema").get<int>() != kReportSchemaVersion) {
      throw std::runtime_error("unsupported schema version");
    }
    auto state = [](const ordered_json& v) {
      auto s = safety::safety_state_from_string(v.get<std::string>());
      if (!s) throw std::runtime_error("unknown state '" + v.get<std::string>() + "'");
      return *s;
    };
    safety::SafetyReport r;
    r.frame_index = j.at("frame_index").get<std::uint64_t>();
    r.timestamp_us = j.at("timestamp_us").get<std::uint64_t>();
    r.ego_speed_mps = j.at("ego_speed_mps").get<double>();
    r.overall_state = state(j.at("overall_state"));
    for (const auto& jo : j.at("objects")) {
      safety::ObjectReport o;
      o.object_id = jo.at("object_id").get<std::uint32_t>();
      auto cls = scene::object_class_from_string(jo.at("class").get<std::string>());
      if (!cls) throw std::runtime_error("unknown class");
      o.object_class = *cls;
      o.distance_m = jo.at("distance_m").get<double>();
      const auto& rel = jo.at("rel");
      o.rel = {rel.at(0).get<double>(), rel.at(1).get<double>(), rel.at(2).get<double>()};
      o.abs_speed_mps = jo.at("abs_speed_mps").get<double>();
      o.range_rate_mps = jo.at("range_rate_mps").get<double>();
      o.approach_speed_mps = jo.at("approach_speed_mps").get<double>();
      o.yaw_deg = jo.at("yaw_deg").get<double>();
      o.orientation = safety::orientation_class(o.yaw_deg);
      o.ttc_s = seconds_from(jo.at("ttc_s"));
      o.thw_s = seconds_from(jo.at("thw_s"));
      o.state = state(jo.at("state"));
      o.stale = jo.at("stale").get<bool>();
      r.objects.push_back(o);
    }
    return r;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(Errc::kParseError, e.what(), line_no);
  }
}

std::vector<safety::SafetyReport> read_report_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIo, "cannot open " + path.string());
  std::vector<safety::SafetyReport> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_report_line(line, n));
  }
  return out;
}

ReportLogWriter::ReportLogWriter(const std::filesystem::path& path) : out_(path) {
  if (!out_) throw Error(Errc::kIo, "cannot write " + path.string());
}

void ReportLogWriter::write(const safety::SafetyReport& report,
                            std::optional<safety::SafetyState> effective) {
  out_ << report_to_json_line(report, effective) << '\n';
}

void ReportLogWriter::flush() { out_.flush(); }

wire::TelemetryMessage make_telemetry(const scene::SceneFrame& frame,
                                      const safety::SafetyReport& report,
                                      std::uint32_t seq, std::uint64_t timestamp_us) {
  wire::TelemetryMessage m;
  m.header = {seq, timestamp_us};
  m.ego_lat = frame.ego_lat;
  m.ego_lon = frame.ego_lon;
  m.ego_yaw_deg = static_cast<float>(frame.ego_yaw_deg);
  m.ego_speed_mps = static_cast<float>(frame.ego_speed_mps);
  m.overall_state = report.overall_state;
  for (const auto& o : report.objects) {
    if (o.stale) continue;
    if (m.objects.size() == wire::kMaxObjects) break;
    wire::ObjectRecord rec;
    rec.id = o.object_id;
    rec.object_class = o.object_class;
    rec.rel_x = static_cast<float>(o.rel.x);
    rec.rel_y = static_cast<float>(o.rel.y);
    rec.rel_z = static_cast<float>(o.rel.z);
    rec.abs_speed_mps = static_cast<float>(o.abs_speed_mps);
    rec.yaw_deg = static_cast<float>(o.yaw_deg);
    rec.ttc_s = to_wire_seconds(o.ttc_s);
    rec.thw_s = to_wire_seconds(o.thw_s);
    rec.state = o.state;
    m.objects.push_back(rec);
  }
  return m;
}

}  // namespace v2i::app
