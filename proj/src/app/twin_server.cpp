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

#include "v2i/app/twin_server.hpp"

#include <spdlog/spdlog.h>

#include "v2i/error.hpp"
#include "v2i/wire/codec.hpp"

namespace v2i::app {

std::uint64_t monotonic_us() {
  return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::microseconds>(
                                        std::chrono::steady_clock::now().time_since_epoch())
                                        .count());
}

TwinServer::TwinServer(ServerConfig cfg, std::unique_ptr<wire::DatagramSocket> socket)
    : cfg_(std::move(cfg)),
      socket_(std::move(socket)),
      twin_(cfg_.twin),
      alerts_(cfg_.alert_queue_depth),
      session_(cfg_.session) {
  cfg_.validate();
}

TwinServer::~TwinServer() { stop(); }

void TwinServer::start() {
  if (running_.exchange(true)) return;
  ingest_ = std::thread([this] { ingest_loop(); });
  downlink_ = std::thread([this] { downlink_loop(); });
}

void TwinServer::stop() {
  if (!running_.exchange(false)) return;
  alerts_.close();
  if (ingest_.joinable()) ingest_.join();
  if (downlink_.joinable()) downlink_.join();
  socket_->close();
}

void TwinServer::set_telemetry_hook(TelemetryHook hook) { hook_ = std::move(hook); }

twin::TwinSnapshot TwinServer::snapshot() const {
  auto s = twin_.snapshot();
  {
    std::lock_guard lock(session_mu_);
    s.ego.connected = session_.connected(wire::wall_clock_us());
  }
  s.ego.link = link_.snapshot();
  return s;
}

ServerStats TwinServer::stats() const {
  ServerStats st;
  st.link = link_.snapshot();
  {
    std::lock_guard lock(session_mu_);
    st.connected = session_.connected(wire::wall_clock_us());
    st.vehicle = session_.vehicle();
    st.rtt_ms = session_.last_rtt_ms();
  }
  const auto snap = twin_.snapshot();
  st.telemetry_applied = snap.telemetry_applied;
  st.entities = snap.entities.size();
  st.alerts_pending = alerts_.size();
  st.alerts_dropped = alerts_.dropped();
  st.alerts_sent = alerts_sent_;
  return st;
}

wire::OperatorMessage TwinServer::submit_alert(wire::Severity severity,
                                               wire::StateOverride state_override,
                                               std::string_view text) {
  auto msg = twin::enqueue_operator_alert(alerts_, severity, state_override, text,
                                          wire::wall_clock_us());
  spdlog::info("operator alert queued: seq {} {} override {} \"{}\"", msg.header.seq,
               wire::to_string(severity), wire::to_string(state_override), msg.text);
  return msg;
}

void TwinServer::send(const wire::Endpoint& to, const wire::Message& msg) {
  try {
    socket_->send_to(to, wire::encode(msg));
  } catch (const Error& e) {
    spdlog::warn("send to {} failed: {}", to.to_string(), e.what());
  }
}

void TwinServer::ingest_loop() {
  while (running_) {
    if (auto r = socket_->receive(std::chrono::milliseconds(20))) handle(*r);
    periodic(wire::wall_clock_us());
  }
}

void TwinServer::handle(const wire::Received& r) {
  link_.on_datagram();
  wire::Message msg;
  try {
    msg = wire::decode(r.bytes);
  } catch (const Error& e) {
    link_.on_decode_failure();
    spdlog::debug("dropped datagram from {}: {}", r.from.to_string(), e.what());
    return;
  }

  if (const auto* t = std::get_if<wire::TelemetryMessage>(&msg)) {
    link_.on_telemetry(t->header.seq, t->header.timestamp_us, r.recv_us);
    if (twin_.ingest(*t, monotonic_us())) {
      if (hook_) hook_(*t, wire::wall_clock_us());
      if (cfg_.auto_override) maybe_auto_override(*t);
    } else {
      link_.on_out_of_order();
    }
  } else if (std::holds_alternative<wire::HelloMessage>(msg)) {
    twin_.reset_sequence();
  }

  std::vector<wire::TwinSession::Outbound> replies;
  std::vector<wire::TwinSession::RoundTrip> round_trips;
  {
    std::lock_guard lock(session_mu_);
    const auto before = session_.vehicle();
    replies = session_.on_message(r.from, msg, r.recv_us);
    round_trips = session_.take_round_trips();
    if (std::holds_alternative<wire::HelloMessage>(msg) && before != session_.vehicle()) {
      spdlog::info("vehicle address {}", r.from.to_string());
    }
  }
  for (const auto& rt : round_trips) link_.on_round_trip(rt.seq, rt.sent_us, rt.acked_us);
  for (const auto& out : replies) send(out.to, out.msg);
}

void TwinServer::periodic(std::uint64_t now_us) {
  std::vector<wire::TwinSession::Outbound> probes;
  bool connected = false;
  {
    std::lock_guard lock(session_mu_);
    probes = session_.poll(now_us);
    connected = session_.connected(now_us);
  }
  for (const auto& out : probes) send(out.to, out.msg);
  if (connected != was_connected_) {
    was_connected_ = connected;
    if (connected) {
      spdlog::info("vehicle connected");
    } else {
      spdlog::warn("vehicle disconnected: no traffic for {} ms",
                   cfg_.session.liveness_timeout_us() / 1000);
    }
  }

  if (now_us - last_maintenance_us_ >= 100'000) {
    last_maintenance_us_ = now_us;
    twin_.expire(monotonic_us());
  }

  const auto period_us = static_cast<std::uint64_t>(cfg_.stats_period.count()) * 1000;
  if (period_us > 0 && now_us - last_stats_log_us_ >= period_us) {
    last_stats_log_us_ = now_us;
    const auto snap = link_.snapshot();
    if (snap.one_way) {
      const auto& s = *snap.one_way;
      spdlog::info(
          "link: latency min {:.3f} max {:.3f} mean {:.3f} std {:.3f} ms, loss {:.3f}% "
          "({} of {}), decode failures {}, out of order {}",
          s.latency_min_ms, s.latency_max_ms, s.latency_mean_ms, s.latency_std_ms,
          100.0 * s.loss_rate, s.received, s.sent_estimate, snap.decode_failures,
          snap.out_of_order_dropped);
    }
  }
}

void TwinServer::downlink_loop() {
  while (running_) {
    std::optional<wire::Endpoint> target;
    {
      std::lock_guard lock(session_mu_);
      target = session_.downlink_target(wire::wall_clock_us());
    }
    if (!target) {
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
      continue;
    }
    auto msg = alerts_.pop(std::chrono::milliseconds(50));
    if (!msg) continue;
    {
      std::lock_guard lock(session_mu_);
      if (auto latest = session_.vehicle()) target = latest;
    }
    send(*target, *msg);
    ++alerts_sent_;
  }
}

void TwinServer::maybe_auto_override(const wire::TelemetryMessage& msg) {
  const auto twin_state = twin_.snapshot().ego.overall_state;
  if (twin_state != safety::SafetyState::kDangerous ||
      msg.overall_state == safety::SafetyState::kDangerous) {
    return;
  }
  const std::uint64_t now = wire::wall_clock_us();
  if (now - last_auto_override_us_ < 10'000'000) return;
  last_auto_override_us_ = now;
  submit_alert(wire::Severity::kWarning, wire::StateOverride::kDangerous,
               "Twin classifies the scene as dangerous");
}

}  // namespace v2i::app
