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

#ifndef V2I_APP_CONFIG_HPP_
#define V2I_APP_CONFIG_HPP_

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>

#include "v2i/geometry/geometry.hpp"
#include "v2i/safety/tracker.hpp"
#include "v2i/twin/entity_store.hpp"
#include "v2i/wire/endpoint.hpp"
#include "v2i/wire/session.hpp"

namespace v2i::app {

enum class SourceKind { kLog, kScenario };

struct SourceSpec {
  SourceKind kind = SourceKind::kLog;
  std::filesystem::path path;

  // "log:<path>" or "scenario:<path>"; throws Errc::kConfig.
  static SourceSpec parse(const std::string& text);
};

struct AgentConfig {
  std::optional<SourceSpec> source;
  geo::CameraIntrinsics intrinsics;
  safety::TrackerConfig tracker;
  wire::Endpoint twin{"127.0.0.1", 47000};
  wire::Endpoint bind{"0.0.0.0", 0};
  wire::SessionTiming session;
  // One telemetry message every `send_every` frames.
  std::uint32_t send_every = 1;
  // Pace frames by their timestamps instead of running flat out.
  bool realtime = false;
  std::optional<std::filesystem::path> report_log;
  bool dashboard = true;
  bool color = false;
  // Keep the downlink open this long after the last frame.
  std::chrono::milliseconds linger{0};
  // Loopback mode: in-process twin behind a simulated channel.
  bool loopback = false;
  std::string channel = "lossless";

  void validate() const;
};

struct ServerConfig {
  wire::Endpoint listen{"0.0.0.0", 47000};
  wire::Endpoint http{"127.0.0.1", 8080};
  twin::TwinConfig twin;
  wire::SessionTiming session;
  std::chrono::milliseconds stats_period{5000};
  double push_hz = 10.0;
  std::size_t alert_queue_depth = 8;
  // Push a Dangerous override when the twin's own classification is worse
  // than what the vehicle reports.
  bool auto_override = false;

  void validate() const;
};

// Both configs read the same JSON document: shared "intrinsics", "tracker",
// "thresholds" and "session" blocks plus "agent" and "server" sections.
// Missing keys keep their defaults. Throws Errc::kConfig.
AgentConfig load_agent_config(const std::filesystem::path& path);
ServerConfig load_server_config(const std::filesystem::path& path);
AgentConfig parse_agent_config(const std::string& json_text);
ServerConfig parse_server_config(const std::string& json_text);

// "lat,lon"; throws Errc::kConfig.
geo::GeoOrigin parse_origin(const std::string& text);

}  // namespace v2i::app

#endif  // V2I_APP_CONFIG_HPP_
