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

#ifndef V2I_TWIN_SHARED_TWIN_HPP_
#define V2I_TWIN_SHARED_TWIN_HPP_

#include <cstdint>
#include <mutex>
#include <optional>

#include "v2i/twin/entity_store.hpp"

namespace v2i::twin {

// Entity store shared between one ingest writer and any number of snapshot
// readers. Every call is atomic with respect to the others.
class SharedTwin {
 public:
  explicit SharedTwin(TwinConfig cfg = {}) : store_(cfg) {}

  // Applies telemetry unless it is not newer than the last applied message.
  std::optional<StoreDiff> ingest(const wire::TelemetryMessage& msg, std::uint64_t recv_ts_us);

  // Forgets the last applied seq, e.g. after the vehicle restarts its session.
  void reset_sequence();

  std::vector<std::uint32_t> expire(std::uint64_t now_us);
  void set_link(bool connected, const wire::LinkMonitor::Snapshot& link);
  TwinSnapshot snapshot() const;

 private:
  mutable std::mutex mu_;
  EntityStore store_;
  std::optional<std::uint32_t> last_seq_;
};

}  // namespace v2i::twin

#endif  // V2I_TWIN_SHARED_TWIN_HPP_
