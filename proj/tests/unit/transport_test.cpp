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

#include <chrono>

#include "v2i/error.hpp"
#include "v2i/wire/transport.hpp"

namespace v2i::wire {
namespace {

using namespace std::chrono_literals;

TEST(UdpSocket, SendReceiveOnLocalhost) {
  UdpSocket a({"127.0.0.1", 0});
  UdpSocket b({"127.0.0.1", 0});
  ASSERT_NE(a.local_endpoint().port, 0);
  a.send_to(b.local_endpoint(), {1, 2, 3});
  const auto r = b.receive(2000ms);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->bytes, (std::vector<std::uint8_t>{1, 2, 3}));
  EXPECT_EQ(r->from, a.local_endpoint());
  EXPECT_GT(r->recv_us, 0U);
}

TEST(UdpSocket, ReceiveTimesOutAndCloseIsIdempotent) {
  UdpSocket a({"127.0.0.1", 0});
  EXPECT_FALSE(a.receive(20ms));
  a.close();
  a.close();
  EXPECT_FALSE(a.receive(20ms));
}

TEST(UdpSocket, BindConflictIsIoError) {
  UdpSocket a({"127.0.0.1", 0});
  try {
    UdpSocket b(a.local_endpoint());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kIo);
  }
}

TEST(LoopbackNetwork, DeliversAndReportsSender) {
  auto net = LoopbackNetwork::create();
  auto a = net->bind({"a", 1});
  auto b = net->bind({"b", 2});
  a->send_to({"b", 2}, {9});
  const auto r = b->receive(100ms);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->from, (Endpoint{"a", 1}));
  EXPECT_EQ(r->bytes, std::vector<std::uint8_t>{9});
  a->send_to({"nobody", 3}, {1});
  EXPECT_EQ(net->counters().undeliverable, 1U);
}

TEST(LoopbackNetwork, DuplicateBindIsIoError) {
  auto net = LoopbackNetwork::create();
  auto a = net->bind({"a", 1});
  try {
    net->bind({"a", 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kIo);
  }
}

TEST(LoopbackNetwork, ChannelDropsAndDelays) {
  auto net = LoopbackNetwork::create();
  auto a = net->bind({"a", 1});
  auto b = net->bind({"b", 2});
  ChannelModel drop;
  drop.drop_probability = 1.0;
  net->set_channel({"a", 1}, {"b", 2}, drop);
  for (int i = 0; i < 10; ++i) a->send_to({"b", 2}, {1});
  EXPECT_FALSE(b->receive(20ms));
  EXPECT_EQ(net->counters().dropped, 10U);

  ChannelModel slow;
  slow.base_delay_ms = 60.0;
  net->set_channel({"a", 1}, {"b", 2}, slow);
  const auto t0 = wall_clock_us();
  a->send_to({"b", 2}, {2});
  const auto r = b->receive(1000ms);
  ASSERT_TRUE(r);
  EXPECT_GE(r->recv_us - t0, 59000U);
}

TEST(LoopbackNetwork, CloseWakesReceiver) {
  auto net = LoopbackNetwork::create();
  auto a = net->bind({"a", 1});
  a->close();
  EXPECT_FALSE(a->receive(1000ms));
}

}  // namespace
}  // namespace v2i::wire
