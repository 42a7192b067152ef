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

#include <variant>

#include "v2i/error.hpp"
#include "v2i/wire/endpoint.hpp"
#include "v2i/wire/session.hpp"

namespace v2i::wire {
namespace {

constexpr std::uint64_t kSec = 1'000'000;

template <typename T>
std::size_t count_of(const std::vector<Message>& msgs) {
  std::size_t n = 0;
  for (const auto& m : msgs) n += std::holds_alternative<T>(m);
  return n;
}

// Runs the vehicle with nobody answering and returns Hello send times.
std::vector<std::uint64_t> hello_times(VehicleSession& v, std::uint64_t until_us,
                                       std::uint64_t step_us) {
  std::vector<std::uint64_t> times;
  for (std::uint64_t t = 0; t <= until_us; t += step_us) {
    for (const auto& m : v.poll(t)) {
      if (std::holds_alternative<HelloMessage>(m)) times.push_back(t);
    }
  }
  return times;
}

AckMessage ack_for(const Message& hello) {
  const auto& h = std::get<HelloMessage>(hello).header;
  return AckMessage{{0, 0}, h.seq, h.timestamp_us};
}

TEST(Endpoint, Parse) {
  const auto e = Endpoint::parse("127.0.0.1:47000");
  EXPECT_EQ(e.host, "127.0.0.1");
  EXPECT_EQ(e.port, 47000);
  EXPECT_EQ(Endpoint::parse(":9").host, "0.0.0.0");
  EXPECT_EQ(e.to_string(), "127.0.0.1:47000");
  for (const char* bad : {"nohost", "h:", "h:70000", "h:-1", "h:abc", "h:80x"}) {
    try {
      Endpoint::parse(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& err) {
      EXPECT_EQ(err.code(), Errc::kConfig) << bad;
    }
  }
}

TEST(VehicleSession, HelloFirstThenExponentialBackoff) {
  VehicleSession v;
  const auto times = hello_times(v, 40 * kSec, 100000);
  const std::vector<std::uint64_t> expected{0, 1 * kSec, 3 * kSec, 7 * kSec, 15 * kSec,
                                            23 * kSec, 31 * kSec, 39 * kSec};
  EXPECT_EQ(times, expected);
  EXPECT_EQ(v.state(), VehicleSession::State::kAwaitingAck);
}

TEST(VehicleSession, WarnsOnceWhenUnreachable) {
  VehicleSession v;
  v.poll(0);
  EXPECT_FALSE(v.take_unreachable_warning());
  v.poll(kSec);
  EXPECT_TRUE(v.take_unreachable_warning());
  EXPECT_FALSE(v.take_unreachable_warning());
  v.poll(3 * kSec);
  v.poll(7 * kSec);
  EXPECT_FALSE(v.take_unreachable_warning());
}

TEST(VehicleSession, AckEstablishesAndHeartbeatsEverySecond) {
  VehicleSession v;
  const auto hello = v.poll(0);
  ASSERT_EQ(hello.size(), 1U);
  v.on_message(ack_for(hello[0]), 20000);
  EXPECT_TRUE(v.established());
  ASSERT_TRUE(v.last_rtt_ms());
  EXPECT_DOUBLE_EQ(*v.last_rtt_ms(), 20.0);

  std::vector<std::uint64_t> beats;
  for (std::uint64_t t = 20000; t <= 4 * kSec; t += 10000) {
    v.on_message(AckMessage{}, t);  // twin keeps answering
    for (const auto& m : v.poll(t)) {
      ASSERT_TRUE(std::holds_alternative<HeartbeatMessage>(m));
      beats.push_back(t);
    }
  }
  const std::vector<std::uint64_t> expected{1020000, 2020000, 3020000};
  EXPECT_EQ(beats, expected);
}

TEST(VehicleSession, StaleAckIgnored) {
  VehicleSession v;
  const auto first = v.poll(0);
  v.poll(kSec);  // second Hello supersedes the first
  v.on_message(ack_for(first[0]), kSec + 10);
  EXPECT_FALSE(v.established());
}

TEST(VehicleSession, SilenceReturnsToHello) {
  VehicleSession v;
  const auto hello = v.poll(0);
  v.on_message(ack_for(hello[0]), 0);
  std::vector<Message> sent;
  for (std::uint64_t t = 0; t <= 6 * kSec; t += 100000) {
    const auto out = v.poll(t);
    sent.insert(sent.end(), out.begin(), out.end());
    if (!v.established()) break;
  }
  EXPECT_FALSE(v.established());
  EXPECT_EQ(count_of<HelloMessage>(sent), 1U);
  EXPECT_EQ(count_of<HeartbeatMessage>(sent), 5U);
}

TEST(VehicleSession, AnswersTwinHeartbeat) {
  VehicleSession v;
  const auto out = v.on_message(HeartbeatMessage{{42, 777}}, 1000);
  ASSERT_EQ(out.size(), 1U);
  const auto& a = std::get<AckMessage>(out[0]);
  EXPECT_EQ(a.acked_seq, 42U);
  EXPECT_EQ(a.echoed_timestamp_us, 777U);
}

TEST(TwinSession, HelloLearnsAddressAndIsAcked) {
  TwinSession t;
  EXPECT_FALSE(t.downlink_target(0));
  const Endpoint nat{"203.0.113.5", 40001};
  const auto out = t.on_message(nat, HelloMessage{{3, 100}}, 500);
  ASSERT_EQ(out.size(), 1U);
  EXPECT_EQ(out[0].to, nat);
  const auto& a = std::get<AckMessage>(out[0].msg);
  EXPECT_EQ(a.acked_seq, 3U);
  EXPECT_EQ(a.echoed_timestamp_us, 100U);
  EXPECT_EQ(t.downlink_target(600), nat);
}

TEST(TwinSession, LatestHelloWins) {
  TwinSession t;
  const Endpoint a{"10.0.0.1", 1000};
  const Endpoint b{"10.0.0.1", 2000};
  t.on_message(a, HelloMessage{}, 0);
  t.on_message(b, HelloMessage{}, kSec);
  EXPECT_EQ(t.downlink_target(kSec), b);
  EXPECT_EQ(t.vehicle(), b);
}

TEST(TwinSession, DisconnectAfterFiveSilentSeconds) {
  TwinSession t;
  const Endpoint v{"10.0.0.1", 1000};
  t.on_message(v, HelloMessage{}, 0);
  for (std::uint64_t s = 1; s <= 3; ++s) t.on_message(v, HeartbeatMessage{}, s * kSec);
  EXPECT_TRUE(t.connected(8 * kSec));
  EXPECT_FALSE(t.connected(8 * kSec + 1));
  EXPECT_FALSE(t.downlink_target(9 * kSec));
}

TEST(TwinSession, OtherSourcesDoNotKeepVehicleAlive) {
  TwinSession t;
  const Endpoint v{"10.0.0.1", 1000};
  t.on_message(v, HelloMessage{}, 0);
  t.on_message({"10.0.0.9", 1}, HeartbeatMessage{}, 4 * kSec);
  EXPECT_FALSE(t.connected(6 * kSec));
}

TEST(TwinSession, ProbesAndMeasuresRoundTrip) {
  TwinSession t;
  const Endpoint v{"10.0.0.1", 1000};
  t.on_message(v, HelloMessage{}, 0);
  EXPECT_TRUE(t.poll(kSec / 2).empty());
  const auto probes = t.poll(kSec);
  ASSERT_EQ(probes.size(), 1U);
  EXPECT_EQ(probes[0].to, v);
  const auto& hb = std::get<HeartbeatMessage>(probes[0].msg);
  t.on_message(v, AckMessage{{0, 0}, hb.header.seq, hb.header.timestamp_us}, kSec + 35000);
  ASSERT_TRUE(t.last_rtt_ms());
  EXPECT_DOUBLE_EQ(*t.last_rtt_ms(), 35.0);
  const auto rts = t.take_round_trips();
  ASSERT_EQ(rts.size(), 1U);
  EXPECT_EQ(rts[0].sent_us, kSec);
  EXPECT_TRUE(t.take_round_trips().empty());
}

TEST(SessionPair, HandshakeOverDirectCalls) {
  VehicleSession v;
  TwinSession t;
  const Endpoint vehicle_ep{"192.0.2.1", 5555};
  std::uint64_t now = 0;
  for (const auto& m : v.poll(now)) {
    for (const auto& reply : t.on_message(vehicle_ep, m, now + 1000)) {
      v.on_message(reply.msg, now + 2000);
    }
  }
  EXPECT_TRUE(v.established());
  EXPECT_TRUE(t.connected(now + 2000));
  // Heartbeats every second keep both sides up for a minute.
  for (now = 0; now < 60 * kSec; now += 50000) {
    for (const auto& m : v.poll(now)) {
      for (const auto& reply : t.on_message(vehicle_ep, m, now)) v.on_message(reply.msg, now);
    }
    for (const auto& probe : t.poll(now)) {
      for (const auto& reply : v.on_message(probe.msg, now)) t.on_message(vehicle_ep, reply, now);
    }
    ASSERT_TRUE(v.established()) << now;
    ASSERT_TRUE(t.connected(now)) << now;
  }
}

TEST(SequenceCounters, PerTypeMonotonic) {
  SequenceCounters c;
  EXPECT_EQ(c.next(MessageType::kTelemetry), 0U);
  EXPECT_EQ(c.next(MessageType::kTelemetry), 1U);
  EXPECT_EQ(c.next(MessageType::kHello), 0U);
}

}  // namespace
}  // namespace v2i::wire
