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

#ifndef V2I_WIRE_LINK_STATS_HPP_
#define V2I_WIRE_LINK_STATS_HPP_

#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <unordered_set>

namespace v2i::wire {

struct LinkStats {
  double latency_min_ms = 0.0;
  double latency_max_ms = 0.0;
  double latency_mean_ms = 0.0;
  double latency_std_ms = 0.0;  // population standard deviation
  double loss_rate = 0.0;
  std::uint64_t sent_estimate = 0;
  std::uint64_t received = 0;
  // Receptions with recv < send; counted as received, excluded from latency.
  std::uint64_t clock_skewed = 0;
};

struct ReceptionSample {
  std::uint32_t seq = 0;
  std::uint64_t send_ts_us = 0;
  std::uint64_t recv_ts_us = 0;
  double latency_ms = 0.0;
  bool clock_skew = false;
};

// Latency/loss log over a sliding window of receptions (unbounded when
// capacity is 0). Duplicate sequence numbers inside the window are ignored.
class ReceptionLog {
 public:
  explicit ReceptionLog(std::size_t capacity = 0) : capacity_(capacity) {}

  // Returns false when `seq` is already in the window.
  bool record(std::uint32_t seq, std::uint64_t send_ts_us, std::uint64_t recv_ts_us);

  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const std::deque<ReceptionSample>& samples() const { return samples_; }

 private:
  std::size_t capacity_;
  std::deque<ReceptionSample> samples_;
  std::unordered_set<std::uint32_t> seqs_;
};

ReceptionLog& record_reception(ReceptionLog& log, std::uint32_t seq,
                               std::uint64_t send_ts_us, std::uint64_t recv_ts_us);

// Throws Errc::kNoData when the log holds no latency sample.
LinkStats compute_stats(const ReceptionLog& log);

// Thread-safe wrapper used by network endpoints: one-way telemetry latency,
// heartbeat round-trip time and decode-failure counts.
class LinkMonitor {
 public:
  struct Snapshot {
    std::optional<LinkStats> one_way;
    std::optional<LinkStats> round_trip;
    std::uint64_t decode_failures = 0;
    std::uint64_t datagrams = 0;
    std::uint64_t out_of_order_dropped = 0;
  };

  explicit LinkMonitor(std::size_t window = 10000);

  void on_datagram();
  void on_decode_failure();
  void on_out_of_order();
  void on_telemetry(std::uint32_t seq, std::uint64_t send_ts_us, std::uint64_t recv_ts_us);
  void on_round_trip(std::uint32_t seq, std::uint64_t sent_us, std::uint64_t acked_us);

  Snapshot snapshot() const;

 private:
  mutable std::mutex mu_;
  ReceptionLog one_way_;
  ReceptionLog round_trip_;
  std::uint64_t decode_failures_ = 0;
  std::uint64_t datagrams_ = 0;
  std::uint64_t out_of_order_ = 0;
};

}  // namespace v2i::wire

#endif  // V2I_WIRE_LINK_STATS_HPP_
