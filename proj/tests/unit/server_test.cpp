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

#include <atomic>
#include <chrono>
#include <functional>
#include <sstream>
#include <thread>

#include "v2i/app/twin_server.hpp"
#include "v2i/app/vehicle_agent.hpp"
#include "v2i/error.hpp"
#include "v2i/scene/scenario.hpp"
#include "v2i/wire/codec.hpp"
#include "v2i/wire/transport.hpp"

namespace v2i::app {
namespace {

using namespace std::chrono_literals;

const wire::Endpoint kTwinEp{"twin", 47000};
const wire::Endpoint kVehicleEp{"vehicle", 1};

bool wait_until(const std::function<bool()>& pred, std::chrono::milliseconds limit = 3000ms) {
  const auto end = std::chrono::steady_clock::now() + limit;
  while (std::chrono::steady_clock::now() < end) {
    if (pred()) return true;
    std::this_thread::sleep_for(5ms);
  }
  return pred();
}

ServerConfig quiet_server() {
  ServerConfig cfg;
  cfg.stats_period = 0ms;
  return cfg;
}

std::optional<wire::Message> receive_message(wire::DatagramSocket& s,
                                             std::chrono::milliseconds timeout = 1000ms) {
  const auto r = s.receive(timeout);
  if (!r) return std::nullopt;
  return wire::decode(r->bytes);
}

// Sends Hello from `s` and returns once the twin has acknowledged it.
void hello(wire::DatagramSocket& s, std::uint32_t seq) {
  const auto ts = wire::wall_clock_us();
  s.send_to(kTwinEp, wire::encode(wire::HelloMessage{{seq, ts}}));
  for (int i = 0; i < 10; ++i) {
    const auto m = receive_message(s);
    ASSERT_TRUE(m) << "no Ack";
    if (const auto* a = std::get_if<wire::AckMessage>(&*m)) {
      EXPECT_EQ(a->acked_seq, seq);
      EXPECT_EQ(a->echoed_timestamp_us, ts);
      return;
    }
  }
  FAIL() << "no Ack";
}

std::optional<wire::OperatorMessage> next_operator(wire::DatagramSocket& s,
                                                   std::chrono::milliseconds timeout) {
  const auto end = std::chrono::steady_clock::now() + timeout;
  while (std::chrono::steady_clock::now() < end) {
    const auto m = receive_message(s, 50ms);
    if (!m) continue;
    if (const auto* op = std::get_if<wire::OperatorMessage>(&*m)) return *op;
  }
  return std::nullopt;
}

TEST(TwinServer, AgentStreamLosslessLoopback) {
  auto net = wire::LoopbackNetwork::create();
  TwinServer server(quiet_server(), net->bind(kTwinEp));
  std::atomic<int> hook_calls{0};
  server.set_telemetry_hook([&](const wire::TelemetryMessage&, std::uint64_t) { ++hook_calls; });
  server.start();

  auto spec = scene::deceleration_scenario();
  spec.duration_s = 5.0;
  AgentConfig cfg;
  cfg.twin = kTwinEp;
  cfg.dashboard = false;
  VehicleAgent agent(cfg, std::make_unique<scene::ScenarioGenerator>(spec, cfg.intrinsics),
                     net->bind(kVehicleEp), nullptr);
  agent.set_capture(true);
  std::atomic<bool> stop{false};
  const auto summary = agent.run(stop);
  ASSERT_EQ(summary.frames, 100U);
  ASSERT_EQ(summary.telemetry_sent, 100U);

  ASSERT_TRUE(wait_until([&] { return server.stats().telemetry_applied == 100; }));
  EXPECT_EQ(hook_calls.load(), 100);
  const auto st = server.stats();
  EXPECT_TRUE(st.connected);
  ASSERT_TRUE(st.vehicle);
  EXPECT_EQ(*st.vehicle, kVehicleEp);
  ASSERT_TRUE(st.link.one_way);
  EXPECT_EQ(st.link.one_way->loss_rate, 0.0);
  EXPECT_EQ(st.link.one_way->received, 100U);
  EXPECT_EQ(st.link.decode_failures, 0U);

  const auto snap = server.snapshot();
  EXPECT_TRUE(snap.ego.connected);
  const auto& last = agent.sent().back();
  EXPECT_EQ(snap.ego.last_seq, last.header.seq);
  ASSERT_EQ(snap.entities.size(), last.objects.size());
  for (std::size_t i = 0; i < last.objects.size(); ++i) {
    EXPECT_EQ(snap.entities[i].object_id, last.objects[i].id);
    EXPECT_EQ(snap.entities[i].ttc_s, last.objects[i].ttc_s);
    EXPECT_EQ(snap.entities[i].rel_z, last.objects[i].rel_z);
  }
  server.stop();
}

TEST(TwinServer, DownlinkFollowsLatestHello) {
  auto net = wire::LoopbackNetwork::create();
  TwinServer server(quiet_server(), net->bind(kTwinEp));
  server.start();
  auto first = net->bind({"vehicle", 1000});
  auto second = net->bind({"vehicle", 2000});
  hello(*first, 0);
  hello(*second, 1);
  EXPECT_EQ(server.stats().vehicle, (wire::Endpoint{"vehicle", 2000}));
  server.submit_alert(wire::Severity::kWarning, wire::StateOverride::kHazardous, "moved");
  const auto op = next_operator(*second, 2000ms);
  ASSERT_TRUE(op);
  EXPECT_EQ(op->text, "moved");
  EXPECT_EQ(op->state_override, wire::StateOverride::kHazardous);
  EXPECT_FALSE(next_operator(*first, 200ms));
  server.stop();
}

TEST(TwinServer, AlertBeforeHelloIsHeldThenFlushed) {
  auto net = wire::LoopbackNetwork::create();
  TwinServer server(quiet_server(), net->bind(kTwinEp));
  server.start();
  const auto queued = server.submit_alert(wire::Severity::kRecall, wire::StateOverride::kNone, "return");
  std::this_thread::sleep_for(100ms);
  EXPECT_EQ(server.stats().alerts_pending, 1U);
  EXPECT_EQ(server.stats().alerts_sent, 0U);
  auto v = net->bind(kVehicleEp);
  const auto ts = wire::wall_clock_us();
  v->send_to(kTwinEp, wire::encode(wire::HelloMessage{{0, ts}}));
  const auto op = next_operator(*v, 2000ms);
  ASSERT_TRUE(op);
  EXPECT_EQ(op->header.seq, queued.header.seq);
  EXPECT_EQ(op->severity, wire::Severity::kRecall);
  EXPECT_TRUE(wait_until([&] { return server.stats().alerts_sent == 1; }));
  server.stop();
}

TEST(TwinServer, AlertQueueKeepsNewestWhenFull) {
  auto net = wire::LoopbackNetwork::create();
  auto cfg = quiet_server();
  cfg.alert_queue_depth = 2;
  TwinServer server(cfg, net->bind(kTwinEp));
  server.start();
  for (const char* t : {"a", "b", "c"}) server.submit_alert(wire::Severity::kInfo, wire::StateOverride::kNone, t);
  EXPECT_EQ(server.stats().alerts_dropped, 1U);
  auto v = net->bind(kVehicleEp);
  v->send_to(kTwinEp, wire::encode(wire::HelloMessage{{0, wire::wall_clock_us()}}));
  const auto x = next_operator(*v, 2000ms);
  const auto y = next_operator(*v, 2000ms);
  ASSERT_TRUE(x && y);
  EXPECT_EQ(x->text, "b");
  EXPECT_EQ(y->text, "c");
  server.stop();
}

TEST(TwinServer, InvalidAlertTextRejected) {
  auto net = wire::LoopbackNetwork::create();
  TwinServer server(quiet_server(), net->bind(kTwinEp));
  try {
    server.submit_alert(wire::Severity::kInfo, wire::StateOverride::kNone, std::string(513, 'x'));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kEncodeError);
  }
  EXPECT_EQ(server.stats().alerts_pending, 0U);
}

TEST(TwinServer, MalformedDatagramsCountedAndIgnored) {
  auto net = wire::LoopbackNetwork::create();
  TwinServer server(quiet_server(), net->bind(kTwinEp));
  server.start();
  auto v = net->bind(kVehicleEp);
  v->send_to(kTwinEp, {0xDE, 0xAD});
  auto bytes = wire::encode(wire::HeartbeatMessage{});
  bytes[0] ^= 0xFF;
  v->send_to(kTwinEp, bytes);
  ASSERT_TRUE(wait_until([&] { return server.stats().link.decode_failures == 2; }));
  EXPECT_EQ(server.stats().link.datagrams, 2U);
  EXPECT_FALSE(server.stats().connected);
  hello(*v, 0);
  EXPECT_TRUE(server.stats().connected);
  server.stop();
}

TEST(TwinServer, OutOfOrderTelemetryDropped) {
  auto net = wire::LoopbackNetwork::create();
  TwinServer server(quiet_server(), net->bind(kTwinEp));
  server.start();
  auto v = net->bind(kVehicleEp);
  hello(*v, 0);
  wire::TelemetryMessage t;
  t.objects.push_back({});
  for (std::uint32_t seq : {5U, 3U, 6U, 6U}) {
    t.header = {seq, wire::wall_clock_us()};
    v->send_to(kTwinEp, wire::encode(t));
  }
  ASSERT_TRUE(wait_until([&] { return server.stats().link.out_of_order_dropped == 2; }));
  EXPECT_EQ(server.stats().telemetry_applied, 2U);
  EXPECT_EQ(server.snapshot().ego.last_seq, 6U);
  // A new Hello starts a fresh sequence.
  hello(*v, 1);
  t.header = {0, wire::wall_clock_us()};
  v->send_to(kTwinEp, wire::encode(t));
  ASSERT_TRUE(wait_until([&] { return server.stats().telemetry_applied == 3; }));
  server.stop();
}

TEST(TwinServer, RecallReachesAgentDisplay) {
  auto net = wire::LoopbackNetwork::create();
  TwinServer server(quiet_server(), net->bind(kTwinEp));
  server.start();
  auto spec = scene::constant_gap_scenario();
  spec.duration_s = 1.5;
  AgentConfig cfg;
  cfg.twin = kTwinEp;
  cfg.realtime = true;
  std::ostringstream dash;
  VehicleAgent agent(cfg, std::make_unique<scene::ScenarioGenerator>(spec, cfg.intrinsics),
                     net->bind(kVehicleEp), &dash);
  std::atomic<bool> stop{false};
  std::thread alerter([&] {
    if (wait_until([&] { return server.stats().connected; })) {
      server.submit_alert(wire::Severity::kRecall, wire::StateOverride::kNone, "come back");
    }
  });
  const auto summary = agent.run(stop);
  alerter.join();
  EXPECT_TRUE(summary.twin_acknowledged);
  EXPECT_EQ(summary.operator_messages, 1U);
  EXPECT_GT(summary.state_frames[2], 0U);
  EXPECT_EQ(summary.downlink_malformed, 0U);
  EXPECT_NE(dash.str().find("OPERATOR RECALL"), std::string::npos);
  EXPECT_NE(dash.str().find("come back"), std::string::npos);
  server.stop();
}

TEST(TwinServer, StopIsIdempotent) {
  auto net = wire::LoopbackNetwork::create();
  TwinServer server(quiet_server(), net->bind(kTwinEp));
  server.start();
  server.stop();
  server.stop();
}

}  // namespace
}  // namespace v2i::app
