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

#ifndef V2I_WIRE_SESSION_HPP_
#define V2I_WIRE_SESSION_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "v2i/wire/endpoint.hpp"
#include "v2i/wire/messages.hpp"

namespace v2i::wire {

struct SessionTiming {
  std::uint64_t heartbeat_period_us = 1'000'000;
  std::uint32_t missed_heartbeats = 5;
  std::uint64_t hello_backoff_initial_us = 1'000'000;
  std::uint64_t hello_backoff_max_us = 8'000'000;

  std::uint64_t liveness_timeout_us() const { return heartbeat_period_us * missed_heartbeats; }
};

// Monotonic per-type sequence numbers for one sender.
class SequenceCounters {
 public:
  std::uint32_t next(MessageType t) { return counters_[static_cast<std::size_t>(t)]++; }

 private:
  std::array<std::uint32_t, 6> counters_{};
};

// Vehicle side of the link. The vehicle may sit behind address translation,
// so it always speaks first: Hello (retried with exponential backoff until
// acknowledged), then a Heartbeat every period to keep the mapping alive.
// Silence for missed_heartbeats periods drops it back to the Hello phase.
class VehicleSession {
 public:
  enum class State { kIdle, kAwaitingAck, kEstablished };

  explicit VehicleSession(SessionTiming timing = {});

  // Control messages due at `now_us`.
  std::vector<Message> poll(std::uint64_t now_us);

  // Handles an inbound message; returns replies (Ack for a Heartbeat).
  std::vector<Message> on_message(const Message& msg, std::uint64_t now_us);

  State state() const { return state_; }
  bool established() const { return state_ == State::kEstablished; }
  // True the first time a Hello goes unanswered; false on every later call.
  bool take_unreachable_warning();
  std::optional<double> last_rtt_ms() const { return last_rtt_ms_; }

  std::uint32_t next_seq(MessageType t) { return seq_.next(t); }

 private:
  Message make_hello(std::uint64_t now_us);

  SessionTiming timing_;
  SequenceCounters seq_;
  State state_ = State::kIdle;
  std::uint64_t hello_sent_us_ = 0;
  std::uint32_t hello_seq_ = 0;
  std::uint64_t backoff_us_ = 0;
  std::uint64_t last_heard_us_ = 0;
  std::uint64_t last_heartbeat_us_ = 0;
  bool unreachable_pending_ = false;
  bool unreachable_warned_ = false;
  std::optional<double> last_rtt_ms_;
};

// Twin side. Learns the vehicle's observed address from each Hello and sends
// all downlink traffic there. The vehicle counts as disconnected once nothing
// has been heard from it for missed_heartbeats periods.
class TwinSession {
 public:
  struct Outbound {
    Endpoint to;
    Message msg;
  };

  explicit TwinSession(SessionTiming timing = {});

  // Handles an inbound message from `from`; returns replies.
  std::vector<Outbound> on_message(const Endpoint& from, const Message& msg,
                                   std::uint64_t now_us);

  // Periodic work: liveness probe heartbeats while connected.
  std::vector<Outbound> poll(std::uint64_t now_us);

  bool connected(std::uint64_t now_us) const;
  // Where downlink traffic goes right now; empty when not connected.
  std::optional<Endpoint> downlink_target(std::uint64_t now_us) const;
  std::optional<Endpoint> vehicle() const { return vehicle_; }

  // RTT of the last acknowledged twin heartbeat.
  std::optional<double> last_rtt_ms() const { return last_rtt_ms_; }
  // (seq, sent_us, acked_us) of acknowledged twin heartbeats since last call.
  struct RoundTrip {
    std::uint32_t seq;
    std::uint64_t sent_us;
    std::uint64_t acked_us;
  };
  std::vector<RoundTrip> take_round_trips();

  std::uint32_t next_seq(MessageType t) { return seq_.next(t); }

 private:
  SessionTiming timing_;
  SequenceCounters seq_;
  std::optional<Endpoint> vehicle_;
  std::uint64_t last_heard_us_ = 0;
  std::uint64_t last_probe_us_ = 0;
  std::optional<double> last_rtt_ms_;
  std::vector<RoundTrip> round_trips_;
};

}  // namespace v2i::wire

#endif  // V2I_WIRE_SESSION_HPP_
