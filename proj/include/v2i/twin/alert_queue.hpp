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

#ifndef V2I_TWIN_ALERT_QUEUE_HPP_
#define V2I_TWIN_ALERT_QUEUE_HPP_

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <string_view>
#include <vector>

#include "v2i/wire/messages.hpp"

namespace v2i::twin {

// Bounded downlink queue: many producers, one consumer. When full, the oldest
// message is discarded.
class AlertQueue {
 public:
  explicit AlertQueue(std::size_t depth = 8);

  // Stamps the next downlink seq and queues. Throws Errc::kEncodeError for
  // text that is not valid UTF-8 or exceeds the size limit.
  wire::OperatorMessage push(wire::Severity severity, wire::StateOverride state_override,
                             std::string_view text, std::uint64_t now_us);

  std::optional<wire::OperatorMessage> pop(std::chrono::milliseconds timeout);
  std::vector<wire::OperatorMessage> pending() const;
  std::size_t size() const;
  std::uint64_t dropped() const;
  void close();

 private:
  std::size_t depth_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<wire::OperatorMessage> queue_;
  std::uint32_t next_seq_ = 0;
  std::uint64_t dropped_ = 0;
  bool closed_ = false;
};

inline wire::OperatorMessage enqueue_operator_alert(AlertQueue& queue, wire::Severity severity,
                                                    wire::StateOverride state_override,
                                                    std::string_view text,
                                                    std::uint64_t now_us) {
  return queue.push(severity, state_override, text, now_us);
}

}  // namespace v2i::twin

#endif  // V2I_TWIN_ALERT_QUEUE_HPP_
