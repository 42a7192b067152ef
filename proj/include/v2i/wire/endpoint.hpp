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

#ifndef V2I_WIRE_ENDPOINT_HPP_
#define V2I_WIRE_ENDPOINT_HPP_

#include <cstdint>
#include <string>

namespace v2i::wire {

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;

  std::string to_string() const { return host + ":" + std::to_string(port); }

  // "host:port"; throws Errc::kConfig.
  static Endpoint parse(const std::string& text);

  bool operator==(const Endpoint&) const = default;
  auto operator<=>(const Endpoint&) const = default;
};

// Microseconds on the shared wall clock used for message timestamps.
std::uint64_t wall_clock_us();

}  // namespace v2i::wire

#endif  // V2I_WIRE_ENDPOINT_HPP_
