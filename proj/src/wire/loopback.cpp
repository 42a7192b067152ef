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

#include "v2i/error.hpp"
#include "v2i/wire/transport.hpp"

namespace v2i::wire {

class LoopbackSocket final : public DatagramSocket {
 public:
  LoopbackSocket(std::shared_ptr<LoopbackNetwork> net, Endpoint at)
      : net_(std::move(net)), at_(std::move(at)) {}
  ~LoopbackSocket() override { close(); }

  void send_to(const Endpoint& to, const std::vector<std::uint8_t>& bytes) override {
    net_->send(at_, to, bytes);
  }
  std::optional<Received> receive(std::chrono::milliseconds timeout) override {
    return net_->receive(at_, timeout);
  }
  Endpoint local_endpoint() const override { return at_; }
  void close() override { net_->close(at_); }

 private:
  std::shared_ptr<LoopbackNetwork> net_;
  Endpoint at_;
};

std::shared_ptr<LoopbackNetwork> LoopbackNetwork::create() {
  return std::shared_ptr<LoopbackNetwork>(new LoopbackNetwork());
}

std::unique_ptr<DatagramSocket> LoopbackNetwork::bind(const Endpoint& at) {
  std::lock_guard lock(mu_);
  auto it = mailboxes_.find(at);
  if (it != mailboxes_.end() && !it->second.closed) {
    throw Error(Errc::kIo, "loopback endpoint in use: " + at.to_string());
  }
  mailboxes_[at] = Mailbox{};
  return std::make_unique<LoopbackSocket>(shared_from_this(), at);
}

void LoopbackNetwork::set_channel(const Endpoint& from, const Endpoint& to, ChannelModel model) {
  std::lock_guard lock(mu_);
  channels_.insert_or_assign({from, to}, Channel(model));
}

LoopbackNetwork::Counters LoopbackNetwork::counters() const {
  std::lock_guard lock(mu_);
  return counters_;
}

void LoopbackNetwork::send(const Endpoint& from, const Endpoint& to,
                           const std::vector<std::uint8_t>& bytes) {
  const std::uint64_t now = wall_clock_us();
  {
    std::lock_guard lock(mu_);
    ++counters_.sent;
    std::uint64_t deliver = now;
    if (auto ch = channels_.find({from, to}); ch != channels_.end()) {
      auto t = ch->second.transit(now);
      if (!t) {
        ++counters_.dropped;
        return;
      }
      deliver = *t;
    }
    auto mb = mailboxes_.find(to);
    if (mb == mailboxes_.end() || mb->second.closed) {
      ++counters_.undeliverable;
      return;
    }
    mb->second.queue.push({deliver, order_++, Received{bytes, from, deliver}});
  }
  cv_.notify_all();
}

std::optional<Received> LoopbackNetwork::receive(const Endpoint& at,
                                                 std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  std::unique_lock lock(mu_);
  for (;;) {
    auto mb = mailboxes_.find(at);
    if (mb == mailboxes_.end() || mb->second.closed) return std::nullopt;
    auto wake = deadline;
    if (!mb->second.queue.empty()) {
      const std::uint64_t now = wall_clock_us();
      const auto& head = mb->second.queue.top();
      if (head.deliver_us <= now) {
        Received r = head.datagram;
        mb->second.queue.pop();
        r.recv_us = now;
        return r;
      }
      wake = std::min(wake, std::chrono::steady_clock::now() +
                                std::chrono::microseconds(head.deliver_us - now));
    }
    if (std::chrono::steady_clock::now() >= deadline) return std::nullopt;
    cv_.wait_until(lock, wake);
  }
}

void LoopbackNetwork::close(const Endpoint& at) {
  {
    std::lock_guard lock(mu_);
    auto mb = mailboxes_.find(at);
    if (mb == mailboxes_.end()) return;
    mb->second.closed = true;
    mb->second.queue = {};
  }
  cv_.notify_all();
}

}  // namespace v2i::wire
