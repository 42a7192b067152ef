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

#include "v2i/app/config.hpp"

#include <charconv>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string_view>

#include "v2i/error.hpp"

namespace v2i::app {
namespace {

using nlohmann::json;

template <typename T>
void get_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void read_shared(const json& root, geo::CameraIntrinsics& intr, safety::TrackerConfig& tracker,
                 wire::SessionTiming& session) {
  if (root.contains("intrinsics")) {
    const auto& j = root.at("intrinsics");
    get_if(j, "focal_px", intr.focal_px);
    get_if(j, "baseline_m", intr.baseline_m);
    get_if(j, "principal_u", intr.principal_u);
    get_if(j, "principal_v", intr.principal_v);
    get_if(j, "tilt_deg", intr.tilt_deg);
  }
  if (root.contains("tracker")) {
    const auto& j = root.at("tracker");
    get_if(j, "ema_alpha", tracker.ema_alpha);
    get_if(j, "fps", tracker.fps);
    get_if(j, "depth_window", tracker.depth_window);
    get_if(j, "track_ttl_frames", tracker.track_ttl_frames);
    get_if(j, "ego_speed_min_mps", tracker.ego_speed_min_mps);
    get_if(j, "closing_speed_eps_mps", tracker.closing_speed_eps_mps);
  }
  if (root.contains("thresholds")) {
    const auto& j = root.at("thresholds");
    get_if(j, "ttc_hazard_s", tracker.thresholds.ttc_hazard_s);
    get_if(j, "ttc_danger_s", tracker.thresholds.ttc_danger_s);
    get_if(j, "thw_hazard_s", tracker.thresholds.thw_hazard_s);
    get_if(j, "thw_danger_s", tracker.thresholds.thw_danger_s);
  }
  if (root.contains("session")) {
    const auto& j = root.at("session");
    std::uint64_t ms = session.heartbeat_period_us / 1000;
    get_if(j, "heartbeat_period_ms", ms);
    session.heartbeat_period_us = ms * 1000;
    get_if(j, "missed_heartbeats", session.missed_heartbeats);
    ms = session.hello_backoff_max_us / 1000;
    get_if(j, "hello_backoff_max_ms", ms);
    session.hello_backoff_max_us = ms * 1000;
  }
}

json parse_document(const std::string& text) {
  try {
    auto j = json::parse(text);
    if (!j.is_object()) throw Error(Errc::kConfig, "config must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw Error(Errc::kConfig, std::string("config: ") + e.what());
  }
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kConfig, "cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename F>
auto as_config_error(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == Errc::kConfig) throw;
    throw Error(Errc::kConfig, e.what());
  } catch (const json::exception& e) {
    throw Error(Errc::kConfig, std::string("config: ") + e.what());
  }
}

}  // namespace

SourceSpec SourceSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos || colon + 1 == text.size()) {
    throw Error(Errc::kConfig, "source must be log:<path> or scenario:<path>");
  }
  const auto kind = text.substr(0, colon);
  SourceSpec s;
  s.path = text.substr(colon + 1);
  if (kind == "log") {
    s.kind = SourceKind::kLog;
  } else if (kind == "scenario") {
    s.kind = SourceKind::kScenario;
  } else {
    throw Error(Errc::kConfig, "unknown source kind '" + kind + "'");
  }
  return s;
}

void AgentConfig::validate() const {
  as_config_error([&] {
    intrinsics.validate();
    tracker.validate();
    if (send_every == 0) throw Error(Errc::kConfig, "send_every must be >= 1");
    if (session.heartbeat_period_us == 0 || session.missed_heartbeats == 0) {
      throw Error(Errc::kConfig, "heartbeat period and missed count must be > 0");
    }
    return 0;
  });
}

void ServerConfig::validate() const {
  as_config_error([&] {
    twin.validate();
    if (!(push_hz > 0.0 && push_hz <= 100.0)) throw Error(Errc::kConfig, "push_hz out of range");
    if (alert_queue_depth == 0) throw Error(Errc::kConfig, "alert_queue_depth must be > 0");
    if (session.heartbeat_period_us == 0 || session.missed_heartbeats == 0) {
      throw Error(Errc::kConfig, "heartbeat period and missed count must be > 0");
    }
    return 0;
  });
}

AgentConfig parse_agent_config(const std::string& json_text) {
  const json root = parse_document(json_text);
  return as_config_error([&] {
    AgentConfig cfg;
    read_shared(root, cfg.intrinsics, cfg.tracker, cfg.session);
    if (root.contains("agent")) {
      const auto& j = root.at("agent");
      if (j.contains("source")) cfg.source = SourceSpec::parse(j.at("source").get<std::string>());
      if (j.contains("twin")) cfg.twin = wire::Endpoint::parse(j.at("twin").get<std::string>());
      if (j.contains("bind")) cfg.bind = wire::Endpoint::parse(j.at("bind").get<std::string>());
      get_if(j, "send_every", cfg.send_every);
      get_if(j, "realtime", cfg.realtime);
      if (j.contains("report_log")) cfg.report_log = j.at("report_log").get<std::string>();
      get_if(j, "dashboard", cfg.dashboard);
      get_if(j, "color", cfg.color);
      if (j.contains("linger_ms")) cfg.linger = std::chrono::milliseconds(j.at("linger_ms").get<std::int64_t>());
      get_if(j, "loopback", cfg.loopback);
      get_if(j, "channel", cfg.channel);
    }
    cfg.validate();
    return cfg;
  });
}

ServerConfig parse_server_config(const std::string& json_text) {
  const json root = parse_document(json_text);
  return as_config_error([&] {
    ServerConfig cfg;
    geo::CameraIntrinsics intr;
    safety::TrackerConfig tracker;
    read_shared(root, intr, tracker, cfg.session);
    cfg.twin.thresholds = tracker.thresholds;
    if (root.contains("server")) {
      const auto& j = root.at("server");
      if (j.contains("listen")) cfg.listen = wire::Endpoint::parse(j.at("listen").get<std::string>());
      if (j.contains("http")) cfg.http = wire::Endpoint::parse(j.at("http").get<std::string>());
      if (j.contains("origin")) {
        cfg.twin.origin.lat0 = j.at("origin").at("lat").get<double>();
        cfg.twin.origin.lon0 = j.at("origin").at("lon").get<double>();
      }
      get_if(j, "entity_ttl_ms", cfg.twin.entity_ttl_ms);
      if (j.contains("offset_sign")) {
        const auto s = j.at("offset_sign").get<std::string>();
        if (s == "subtract") {
          cfg.twin.offset_sign = geo::OffsetSign::kSubtract;
        } else if (s == "add") {
          cfg.twin.offset_sign = geo::OffsetSign::kAdd;
        } else {
          throw Error(Errc::kConfig, "offset_sign must be subtract or add");
        }
      }
      if (j.contains("stats_period_ms")) {
        cfg.stats_period = std::chrono::milliseconds(j.at("stats_period_ms").get<std::int64_t>());
      }
      get_if(j, "push_hz", cfg.push_hz);
      get_if(j, "alert_queue_depth", cfg.alert_queue_depth);
      get_if(j, "auto_override", cfg.auto_override);
    }
    cfg.validate();
    return cfg;
  });
}

AgentConfig load_agent_config(const std::filesystem::path& path) {
  return parse_agent_config(slurp(path));
}

ServerConfig load_server_config(const std::filesystem::path& path) {
  return parse_server_config(slurp(path));
}

geo::GeoOrigin parse_origin(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw Error(Errc::kConfig, "origin must be lat,lon");
  const auto number = [&](std::string_view part, double& out) {
    const auto first = part.find_first_not_of(" \t");
    const auto last = part.find_last_not_of(" \t");
    if (first == std::string_view::npos) return false;
    part = part.substr(first, last - first + 1);
    const auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
    return ec == std::errc{} && end == part.data() + part.size();
  };
  geo::GeoOrigin o;
  const std::string_view all(text);
  if (!number(all.substr(0, comma), o.lat0) || !number(all.substr(comma + 1), o.lon0)) {
    throw Error(Errc::kConfig, "bad origin '" + text + "'");
  }
  try {
    o.validate();
  } catch (const Error& e) {
    throw Error(Errc::kConfig, e.what());
  }
  return o;
}

}  // namespace v2i::app
