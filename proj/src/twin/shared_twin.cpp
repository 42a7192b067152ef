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

#include "v2i/twin/shared_twin.hpp"

namespace v2i::twin {

std::optional<StoreDiff> SharedTwin::ingest(const wire::TelemetryMessage& msg,
                                            std::uint64_t recv_ts_us) {
  std::lock_guard lock(mu_);
  if (last_seq_ && !out_of_order_filter(*last_seq_, msg.header.seq)) return std::nullopt;
  last_seq_ = msg.header.seq;
  return store_.apply_telemetry(msg, recv_ts_us);
}

void SharedTwin::reset_sequence() {
  std::lock_guard lock(mu_);
  last_seq_.reset();
}

std::vector<std::uint32_t> SharedTwin::expire(std::uint64_t now_us) {
  std::lock_guard lock(mu_);
  return store_.expire(now_us);
}

void SharedTwin::set_link(bool connected, const wire::LinkMonitor::Snapshot& link) {
  std::lock_guard lock(mu_);
  store_.set_link(connected, link);
}

TwinSnapshot SharedTwin::snapshot() const {
  std::lock_guard lock(mu_);
  return store_.snapshot();
}

}  // namespace v2i::twin
