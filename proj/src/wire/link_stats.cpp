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

#include "v2i/wire/link_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "v2i/error.hpp"

namespace v2i::wire {

bool ReceptionLog::record(std::uint32_t seq, std::uint64_t send_ts_us,
                          std::uint64_t recv_ts_us) {
  if (!seqs_.insert(seq).second) return false;
  ReceptionSample s;
  s.seq = seq;
  s.send_ts_us = send_ts_us;
  s.recv_ts_us = recv_ts_us;
  s.clock_skew = recv_ts_us < send_ts_us;
  s.latency_ms = s.clock_skew
                     ? -static_cast<double>(send_ts_us - recv_ts_us) / 1000.0
                     : static_cast<double>(recv_ts_us - send_ts_us) / 1000.0;
  samples_.push_back(s);
  if (capacity_ > 0 && samples_.size() > capacity_) {
    seqs_.erase(samples_.front().seq);
    samples_.pop_front();
  }
  return true;
}

ReceptionLog& record_reception(ReceptionLog& log, std::uint32_t seq,
                               std::uint64_t send_ts_us, std::uint64_t recv_ts_us) {
  log.record(seq, send_ts_us, recv_ts_us);
  return log;
}

LinkStats compute_stats(const ReceptionLog& log) {
  LinkStats st;
  std::uint32_t min_seq = std::numeric_limits<std::uint32_t>::max();
  std::uint32_t max_seq = 0;
  double sum = 0.0;
  std::uint64_t n = 0;
  st.latency_min_ms = std::numeric_limits<double>::infinity();
  st.latency_max_ms = -std::numeric_limits<double>::infinity();
  for (const auto& s : log.samples()) {
    min_seq = std::min(min_seq, s.seq);
    max_seq = std::max(max_seq, s.seq);
    if (s.clock_skew) {
      ++st.clock_skewed;
      continue;
    }
    st.latency_min_ms = std::min(st.latency_min_ms, s.latency_ms);
    st.latency_max_ms = std::max(st.latency_max_ms, s.latency_ms);
    sum += s.latency_ms;
    ++n;
  }
  if (n == 0) throw Error(Errc::kNoData, "no latency samples");

  st.latency_mean_ms = sum / static_cast<double>(n);
  double sq = 0.0;
  for (const auto& s : log.samples()) {
    if (s.clock_skew) continue;
    const double d = s.latency_ms - st.latency_mean_ms;
    sq += d * d;
  }
  st.latency_std_ms = std::sqrt(sq / static_cast<double>(n));
  // Guards min <= mean <= max against summation rounding.
  st.latency_mean_ms = std::clamp(st.latency_mean_ms, st.latency_min_ms, st.latency_max_ms);

  st.received = log.size();
  st.sent_estimate = static_cast<std::uint64_t>(max_seq) - min_seq + 1;
  st.loss_rate = 1.0 - static_cast<double>(st.received) / static_cast<double>(st.sent_estimate);
  st.loss_rate = std::clamp(st.loss_rate, 0.0, 1.0);
  return st;
}

LinkMonitor::LinkMonitor(std::size_t window) : one_way_(window), round_trip_(window) {}

void LinkMonitor::on_datagram() {
  std::lock_guard lock(mu_);
  ++datagrams_;
}

void LinkMonitor::on_decode_failure() {
  std::lock_guard lock(mu_);
  ++decode_failures_;
}

void LinkMonitor::on_out_of_order() {
  std::lock_guard lock(mu_);
  ++out_of_order_;
}

void LinkMonitor::on_telemetry(std::uint32_t seq, std::uint64_t send_ts_us,
                               std::uint64_t recv_ts_us) {
  std::lock_guard lock(mu_);
  one_way_.record(seq, send_ts_us, recv_ts_us);
}

void LinkMonitor::on_round_trip(std::uint32_t seq, std::uint64_t sent_us,
                                std::uint64_t acked_us) {
  std::lock_guard lock(mu_);
  round_trip_.record(seq, sent_us, acked_us);
}

LinkMonitor::Snapshot LinkMonitor::snapshot() const {
  std::lock_guard lock(mu_);
  Snapshot s;
  s.decode_failures = decode_failures_;
  s.datagrams = datagrams_;
  s.out_of_order_dropped = out_of_order_;
  if (!one_way_.empty()) {
    try {
      s.one_way = compute_stats(one_way_);
    } catch (const Error&) {
      // Only skewed samples so far.
    }
  }
  if (!round_trip_.empty()) {
    try {
      s.round_trip = compute_stats(round_trip_);
    } catch (const Error&) {
    }
  }
  return s;
}

}  // namespace v2i::wire
