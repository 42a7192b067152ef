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

#ifndef V2I_WIRE_TRANSPORT_HPP_
#define V2I_WIRE_TRANSPORT_HPP_

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <queue>
#include <vector>

#include "v2i/wire/channel.hpp"
#include "v2i/wire/endpoint.hpp"

namespace v2i::wire {

struct Received {
  std::vector<std::uint8_t> bytes;
  Endpoint from;
  std::uint64_t recv_us = 0;
};

class DatagramSocket {
 public:
  virtual ~DatagramSocket() = default;

  virtual void send_to(const Endpoint& to, const std::vector<std::uint8_t>& bytes) = 0;
  // Blocks for at most `timeout`. Empty on timeout or after close().
  virtual std::optional<Received> receive(std::chrono::milliseconds timeout) = 0;
  virtual Endpoint local_endpoint() const = 0;
  virtual void close() = 0;
};

// IPv4 UDP. Port 0 binds an ephemeral port. Throws Errc::kIo.
class UdpSocket final : public DatagramSocket {
 public:
  explicit UdpSocket(const Endpoint& bind_to);
  ~UdpSocket() override;
  UdpSocket(const UdpSocket&) = delete;
  UdpSocket& operator=(const UdpSocket&) = delete;

  void send_to(const Endpoint& to, const std::vector<std::uint8_t>& bytes) override;
  std::optional<Received> receive(std::chrono::milliseconds timeout) override;
  Endpoint local_endpoint() const override { return local_; }
  void close() override;

 private:
  int fd_ = -1;
  Endpoint local_;
  std::atomic<bool> closed_{false};
};

// In-process datagram network. Each direction between two endpoints can be
// given a Channel that delays and drops traffic; delivery times use
// wall_clock_us().
class LoopbackNetwork : public std::enable_shared_from_this<LoopbackNetwork> {
 public:
  static std::shared_ptr<LoopbackNetwork> create();

  // Throws Errc::kIo if the endpoint is taken.
  std::unique_ptr<DatagramSocket> bind(const Endpoint& at);
  void set_channel(const Endpoint& from, const Endpoint& to, ChannelModel model);

  struct Counters {
    std::uint64_t sent = 0;
    std::uint64_t dropped = 0;
    std::uint64_t undeliverable = 0;
  };
  Counters counters() const;

 private:
  friend class LoopbackSocket;

  struct Pending {
    std::uint64_t deliver_us;
    std::uint64_t order;
    Received datagram;
    bool operator>(const Pending& o) const {
      return deliver_us != o.deliver_us ? deliver_us > o.deliver_us : order > o.order;
    }
  };
  struct Mailbox {
    std::priority_queue<Pending, std::vector<Pending>, std::greater<>> queue;
    bool closed = false;
  };

  LoopbackNetwork() = default;
  void send(const Endpoint& from, const Endpoint& to, const std::vector<std::uint8_t>& bytes);
  std::optional<Received> receive(const Endpoint& at, std::chrono::milliseconds timeout);
  void close(const Endpoint& at);

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::map<Endpoint, Mailbox> mailboxes_;
  std::map<std::pair<Endpoint, Endpoint>, Channel> channels_;
  std::uint64_t order_ = 0;
  Counters counters_;
};

}  // namespace v2i::wire

#endif  // V2I_WIRE_TRANSPORT_HPP_
