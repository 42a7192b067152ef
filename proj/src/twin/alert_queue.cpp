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

#include "v2i/twin/alert_queue.hpp"

#include "v2i/error.hpp"
#include "v2i/wire/codec.hpp"

namespace v2i::twin {

AlertQueue::AlertQueue(std::size_t depth) : depth_(depth) {
  if (depth_ == 0) throw Error(Errc::kInvalidArgument, "alert queue depth must be > 0");
}

wire::OperatorMessage AlertQueue::push(wire::Severity severity,
                                       wire::StateOverride state_override,
                                       std::string_view text, std::uint64_t now_us) {
  wire::OperatorMessage msg;
  msg.severity = severity;
  msg.state_override = state_override;
  msg.text = std::string(text);
  msg.header.timestamp_us = now_us;
  wire::validate(wire::Message{msg});
  {
    std::lock_guard lock(mu_);
    msg.header.seq = next_seq_++;
    if (queue_.size() == depth_) {
      queue_.pop_front();
      ++dropped_;
    }
    queue_.push_back(msg);
  }
  cv_.notify_one();
  return msg;
}

std::optional<wire::OperatorMessage> AlertQueue::pop(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, timeout, [&] { return closed_ || !queue_.empty(); });
  if (queue_.empty()) return std::nullopt;
  auto msg = std::move(queue_.front());
  queue_.pop_front();
  return msg;
}

std::vector<wire::OperatorMessage> AlertQueue::pending() const {
  std::lock_guard lock(mu_);
  return {queue_.begin(), queue_.end()};
}

std::size_t AlertQueue::size() const {
  std::lock_guard lock(mu_);
  return queue_.size();
}

std::uint64_t AlertQueue::dropped() const {
  std::lock_guard lock(mu_);
  return dropped_;
}

void AlertQueue::close() {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

}  // namespace v2i::twin
