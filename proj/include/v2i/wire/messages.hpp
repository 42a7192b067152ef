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

#ifndef V2I_WIRE_MESSAGES_HPP_
#define V2I_WIRE_MESSAGES_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "v2i/safety/metrics.hpp"
#include "v2i/scene/scene_frame.hpp"

namespace v2i::wire {

inline constexpr std::array<std::uint8_t, 4> kMagic{0x43, 0x44, 0x54, 0x53};  // "CDTS"
inline constexpr std::uint8_t kVersion = 1;

// Byte sizes of the fixed layout; see PROTOCOL.md for offsets.
inline constexpr std::size_t kHeaderSize = 18;
inline constexpr std::size_t kTelemetryFixedSize = 26;  // ego block + object_count
inline constexpr std::size_t kObjectRecordSize = 34;
inline constexpr std::size_t kOperatorFixedSize = 4;
inline constexpr std::size_t kAckBodySize = 12;
inline constexpr std::size_t kMaxTextBytes = 512;
inline constexpr std::size_t kMaxObjects = 255;
inline constexpr std::size_t kMaxDatagramSize =
    kHeaderSize + kTelemetryFixedSize + kMaxObjects * kObjectRecordSize;

enum class MessageType : std::uint8_t {
  kTelemetry = 1,
  kOperatorAlert = 2,
  kHello = 3,
  kHeartbeat = 4,
  kAck = 5,
};

std::string_view to_string(MessageType t);

struct MessageHeader {
  std::uint32_t seq = 0;
  std::uint64_t timestamp_us = 0;

  bool operator==(const MessageHeader&) const = default;
};

struct ObjectRecord {
  std::uint32_t id = 0;
  scene::ObjectClass object_class = scene::ObjectClass::kCar;
  float rel_x = 0.0F;
  float rel_y = 0.0F;
  float rel_z = 0.0F;
  float abs_speed_mps = 0.0F;
  float yaw_deg = 0.0F;
  float ttc_s = std::numeric_limits<float>::infinity();
  float thw_s = std::numeric_limits<float>::infinity();
  safety::SafetyState state = safety::SafetyState::kSafe;

  bool operator==(const ObjectRecord&) const = default;
};

struct TelemetryMessage {
  MessageHeader header;
  double ego_lat = 0.0;
  double ego_lon = 0.0;
  float ego_yaw_deg = 0.0F;
  float ego_speed_mps = 0.0F;
  // Vehicle-side worst object state for the frame.
  safety::SafetyState overall_state = safety::SafetyState::kSafe;
  std::vector<ObjectRecord> objects;

  bool operator==(const TelemetryMessage&) const = default;
};

enum class Severity : std::uint8_t { kInfo = 0, kWarning = 1, kRecall = 2 };

enum class StateOverride : std::uint8_t {
  kNone = 0,
  kSafe = 1,
  kHazardous = 2,
  kDangerous = 3,
};

std::string_view to_string(Severity s);
std::optional<Severity> severity_from_string(std::string_view s);
std::string_view to_string(StateOverride o);
std::optional<StateOverride> state_override_from_string(std::string_view s);
std::optional<safety::SafetyState> to_safety_state(StateOverride o);

struct OperatorMessage {
  MessageHeader header;
  Severity severity = Severity::kInfo;
  StateOverride state_override = StateOverride::kNone;
  std::string text;  // UTF-8, at most kMaxTextBytes bytes

  bool operator==(const OperatorMessage&) const = default;
};

struct HelloMessage {
  MessageHeader header;
  bool operator==(const HelloMessage&) const = default;
};

struct HeartbeatMessage {
  MessageHeader header;
  bool operator==(const HeartbeatMessage&) const = default;
};

// Reply to Hello or Heartbeat, echoing the peer's seq and send timestamp so
// the peer can compute round-trip time.
struct AckMessage {
  MessageHeader header;
  std::uint32_t acked_seq = 0;
  std::uint64_t echoed_timestamp_us = 0;

  bool operator==(const AckMessage&) const = default;
};

using Message = std::variant<TelemetryMessage, OperatorMessage, HelloMessage,
                             HeartbeatMessage, AckMessage>;

MessageType type_of(const Message& m);
const MessageHeader& header_of(const Message& m);
MessageHeader& header_of(Message& m);

bool is_valid_utf8(std::string_view bytes);

}  // namespace v2i::wire

#endif  // V2I_WIRE_MESSAGES_HPP_
