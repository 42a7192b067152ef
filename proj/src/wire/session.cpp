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

#include "v2i/wire/session.hpp"

#include <algorithm>
#include <chrono>

#include "v2i/error.hpp"

namespace v2i::wire {

Endpoint Endpoint::parse(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos) throw Error(Errc::kConfig, "expected host:port, got '" + text + "'");
  Endpoint e;
  e.host = text.substr(0, colon);
  if (e.host.empty()) e.host = "0.0.0.0";
  const auto digits = text.substr(colon + 1);
  const bool numeric = !digits.empty() && digits.size() <= 5 &&
                       std::all_of(digits.begin(), digits.end(),
                                   [](char c) { return c >= '0' && c <= '9'; });
  if (!numeric || std::stoul(digits) > 65535) {
    throw Error(Errc::kConfig, "bad port in '" + text + "'");
  }
  e.port = static_cast<std::uint16_t>(std::stoul(digits));
  return e;
}

std::uint64_t wall_clock_us() {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::microseconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count());
}

VehicleSession::VehicleSession(SessionTiming timing) : timing_(timing) {}

Message VehicleSession::make_hello(std::uint64_t now_us) {
  hello_seq_ = seq_.next(MessageType::kHello);
  hello_sent_us_ = now_us;
  return HelloMessage{{hello_seq_, now_us}};
}

std::vector<Message> VehicleSession::poll(std::uint64_t now_us) {
  std::vector<Message> out;
  switch (state_) {
    case State::kIdle:
      state_ = State::kAwaitingAck;
      backoff_us_ = timing_.hello_backoff_initial_us;
      out.push_back(make_hello(now_us));
      break;
    case State::kAwaitingAck:
      if (now_us - hello_sent_us_ >= backoff_us_) {
        if (!unreachable_warned_) unreachable_pending_ = true;
        backoff_us_ = std::min(backoff_us_ * 2, timing_.hello_backoff_max_us);
        out.push_back(make_hello(now_us));
      }
      break;
    case State::kEstablished:
      if (now_us - last_heard_us_ > timing_.liveness_timeout_us()) {
        state_ = State::kAwaitingAck;
        backoff_us_ = timing_.hello_backoff_initial_us;
        out.push_back(make_hello(now_us));
      } else if (now_us - last_heartbeat_us_ >= timing_.heartbeat_period_us) {
        last_heartbeat_us_ = now_us;
        out.push_back(HeartbeatMessage{{seq_.next(MessageType::kHeartbeat), now_us}});
      }
      break;
  }
  return out;
}

std::vector<Message> VehicleSession::on_message(const Message& msg, std::uint64_t now_us) {
  std::vector<Message> out;
  if (const auto* ack = std::get_if<AckMessage>(&msg)) {
    if (state_ == State::kAwaitingAck && ack->acked_seq == hello_seq_ &&
        ack->echoed_timestamp_us == hello_sent_us_) {
      state_ = State::kEstablished;
      last_heartbeat_us_ = now_us;
    }
    if (now_us >= ack->echoed_timestamp_us) {
      last_rtt_ms_ = static_cast<double>(now_us - ack->echoed_timestamp_us) / 1000.0;
    }
  } else if (const auto* hb = std::get_if<HeartbeatMessage>(&msg)) {
    out.push_back(AckMessage{{seq_.next(MessageType::kAck), now_us},
                             hb->header.seq,
                             hb->header.timestamp_us});
  }
  if (state_ == State::kEstablished) last_heard_us_ = now_us;
  return out;
}

bool VehicleSession::take_unreachable_warning() {
  if (unreachable_pending_) {
    unreachable_pending_ = false;
    unreachable_warned_ = true;
    return true;
  }
  return false;
}

TwinSession::TwinSession(SessionTiming timing) : timing_(timing) {}

std::vector<TwinSession::Outbound> TwinSession::on_message(const Endpoint& from,
                                                           const Message& msg,
                                                           std::uint64_t now_us) {
  std::vector<Outbound> out;
  const bool from_vehicle = vehicle_ && *vehicle_ == from;
  if (const auto* hello = std::get_if<HelloMessage>(&msg)) {
    vehicle_ = from;
    last_heard_us_ = now_us;
    last_probe_us_ = now_us;
    out.push_back({from, AckMessage{{seq_.next(MessageType::kAck), now_us},
                                    hello->header.seq,
                                    hello->header.timestamp_us}});
    return out;
  }
  if (from_vehicle) last_heard_us_ = now_us;
  if (const auto* hb = std::get_if<HeartbeatMessage>(&msg)) {
    out.push_back({from, AckMessage{{seq_.next(MessageType::kAck), now_us},
                                    hb->header.seq,
                                    hb->header.timestamp_us}});
  } else if (const auto* ack = std::get_if<AckMessage>(&msg)) {
    if (from_vehicle && now_us >= ack->echoed_timestamp_us) {
      last_rtt_ms_ = static_cast<double>(now_us - ack->echoed_timestamp_us) / 1000.0;
      round_trips_.push_back({ack->acked_seq, ack->echoed_timestamp_us, now_us});
    }
  }
  return out;
}

std::vector<TwinSession::Outbound> TwinSession::poll(std::uint64_t now_us) {
  std::vector<Outbound> out;
  if (connected(now_us) && now_us - last_probe_us_ >= timing_.heartbeat_period_us) {
    last_probe_us_ = now_us;
    out.push_back({*vehicle_, HeartbeatMessage{{seq_.next(MessageType::kHeartbeat), now_us}}});
  }
  return out;
}

bool TwinSession::connected(std::uint64_t now_us) const {
  return vehicle_.has_value() &&
         (now_us < last_heard_us_ || now_us - last_heard_us_ <= timing_.liveness_timeout_us());
}

std::optional<Endpoint> TwinSession::downlink_target(std::uint64_t now_us) const {
  if (!connected(now_us)) return std::nullopt;
  return vehicle_;
}

std::vector<TwinSession::RoundTrip> TwinSession::take_round_trips() {
  return std::exchange(round_trips_, {});
}

}  // namespace v2i::wire
