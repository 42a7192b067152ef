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

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "v2i/error.hpp"
#include "v2i/wire/codec.hpp"
#include "v2i/wire/transport.hpp"

namespace v2i::wire {
namespace {

[[noreturn]] void fail(const std::string& what) {
  throw Error(Errc::kIo, what + ": " + std::strerror(errno));
}

sockaddr_in resolve(const Endpoint& e) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(e.port);
  if (e.host.empty() || e.host == "0.0.0.0" || e.host == "*") {
    addr.sin_addr.s_addr = htonl(INADDR_ANY);
    return addr;
  }
  if (inet_pton(AF_INET, e.host.c_str(), &addr.sin_addr) == 1) return addr;
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_DGRAM;
  addrinfo* res = nullptr;
  if (getaddrinfo(e.host.c_str(), nullptr, &hints, &res) != 0 || res == nullptr) {
    throw Error(Errc::kIo, "cannot resolve host '" + e.host + "'");
  }
  addr.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
  freeaddrinfo(res);
  return addr;
}

Endpoint to_endpoint(const sockaddr_in& addr) {
  char buf[INET_ADDRSTRLEN] = {};
  inet_ntop(AF_INET, &addr.sin_addr, buf, sizeof buf);
  return {buf, ntohs(addr.sin_port)};
}

}  // namespace

UdpSocket::UdpSocket(const Endpoint& bind_to) {
  fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (fd_ < 0) fail("socket");
  const sockaddr_in addr = resolve(bind_to);
  if (::bind(fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) != 0) {
    const int saved = errno;
    ::close(fd_);
    errno = saved;
    fail("bind " + bind_to.to_string());
  }
  sockaddr_in bound{};
  socklen_t len = sizeof bound;
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  local_ = to_endpoint(bound);
}

UdpSocket::~UdpSocket() {
  if (fd_ >= 0) ::close(fd_);
}

void UdpSocket::send_to(const Endpoint& to, const std::vector<std::uint8_t>& bytes) {
  if (closed_) return;
  const sockaddr_in addr = resolve(to);
  const auto n = ::sendto(fd_, bytes.data(), bytes.size(), 0,
                          reinterpret_cast<const sockaddr*>(&addr), sizeof addr);
  // Datagram loss is part of the model; only programming errors surface.
  if (n < 0 && errno != ECONNREFUSED && errno != ENOBUFS && errno != EAGAIN &&
      errno != ENETUNREACH && errno != EHOSTUNREACH) {
    fail("sendto " + to.to_string());
  }
}

std::optional<Received> UdpSocket::receive(std::chrono::milliseconds timeout) {
  if (closed_) return std::nullopt;
  pollfd pfd{fd_, POLLIN, 0};
  const int ready = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
  if (ready <= 0 || closed_) return std::nullopt;
  Received r;
  r.bytes.resize(kMaxDatagramSize);
  sockaddr_in from{};
  socklen_t len = sizeof from;
  const auto n = ::recvfrom(fd_, r.bytes.data(), r.bytes.size(), 0,
                            reinterpret_cast<sockaddr*>(&from), &len);
  if (n < 0) return std::nullopt;
  r.recv_us = wall_clock_us();
  r.bytes.resize(static_cast<std::size_t>(n));
  r.from = to_endpoint(from);
  return r;
}

void UdpSocket::close() { closed_ = true; }

}  // namespace v2i::wire
