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

#ifndef V2I_APP_TWIN_SERVER_HPP_
#define V2I_APP_TWIN_SERVER_HPP_

#include <atomic>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>

#include "v2i/app/config.hpp"
#include "v2i/twin/alert_queue.hpp"
#include "v2i/twin/shared_twin.hpp"
#include "v2i/wire/link_stats.hpp"
#include "v2i/wire/session.hpp"
#include "v2i/wire/transport.hpp"

namespace v2i::app {

struct ServerStats {
  wire::LinkMonitor::Snapshot link;
  bool connected = false;
  std::optional<wire::Endpoint> vehicle;
  std::uint64_t telemetry_applied = 0;
  std::size_t entities = 0;
  std::size_t alerts_pending = 0;
  std::uint64_t alerts_dropped = 0;
  std::uint64_t alerts_sent = 0;
  std::optional<double> rtt_ms;
};

// Protocol endpoint of the twin: ingest thread (decode, session, store,
// maintenance) and downlink thread (alert queue to the vehicle's address).
class TwinServer {
 public:
  using TelemetryHook = std::function<void(const wire::TelemetryMessage&, std::uint64_t applied_us)>;

  TwinServer(ServerConfig cfg, std::unique_ptr<wire::DatagramSocket> socket);
  ~TwinServer();
  TwinServer(const TwinServer&) = delete;
  TwinServer& operator=(const TwinServer&) = delete;

  void start();
  void stop();

  // Called on the ingest thread after each applied telemetry message.
  void set_telemetry_hook(TelemetryHook hook);

  twin::TwinSnapshot snapshot() const;
  ServerStats stats() const;

  // Throws Errc::kEncodeError for invalid text.
  wire::OperatorMessage submit_alert(wire::Severity severity, wire::StateOverride state_override,
                                     std::string_view text);

  wire::Endpoint local_endpoint() const { return socket_->local_endpoint(); }
  const ServerConfig& config() const { return cfg_; }

 private:
  void ingest_loop();
  void downlink_loop();
  void handle(const wire::Received& r);
  void periodic(std::uint64_t now_us);
  void send(const wire::Endpoint& to, const wire::Message& msg);
  void maybe_auto_override(const wire::TelemetryMessage& msg);

  ServerConfig cfg_;
  std::unique_ptr<wire::DatagramSocket> socket_;
  twin::SharedTwin twin_;
  twin::AlertQueue alerts_;
  wire::LinkMonitor link_;

  mutable std::mutex session_mu_;
  wire::TwinSession session_;
  bool was_connected_ = false;

  TelemetryHook hook_;
  std::atomic<bool> running_{false};
  std::atomic<std::uint64_t> alerts_sent_{0};
  std::thread ingest_;
  std::thread downlink_;
  std::uint64_t last_maintenance_us_ = 0;
  std::uint64_t last_stats_log_us_ = 0;
  std::uint64_t last_auto_override_us_ = 0;
};

// Microseconds on a monotonic clock, used for entity ages.
std::uint64_t monotonic_us();

}  // namespace v2i::app

#endif  // V2I_APP_TWIN_SERVER_HPP_
