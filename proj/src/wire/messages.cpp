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

#include "v2i/wire/messages.hpp"

namespace v2i::wire {

std::string_view to_string(MessageType t) {
  switch (t) {
    case MessageType::kTelemetry: return "Telemetry";
    case MessageType::kOperatorAlert: return "OperatorAlert";
    case MessageType::kHello: return "Hello";
    case MessageType::kHeartbeat: return "Heartbeat";
    case MessageType::kAck: return "Ack";
  }
  return "Unknown";
}

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::kInfo: return "Info";
    case Severity::kWarning: return "Warning";
    case Severity::kRecall: return "Recall";
  }
  return "Unknown";
}

std::optional<Severity> severity_from_string(std::string_view s) {
  if (s == "Info") return Severity::kInfo;
  if (s == "Warning") return Severity::kWarning;
  if (s == "Recall") return Severity::kRecall;
  return std::nullopt;
}

std::string_view to_string(StateOverride o) {
  switch (o) {
    case StateOverride::kNone: return "none";
    case StateOverride::kSafe: return "Safe";
    case StateOverride::kHazardous: return "Hazardous";
    case StateOverride::kDangerous: return "Dangerous";
  }
  return "Unknown";
}

std::optional<StateOverride> state_override_from_string(std::string_view s) {
  if (s == "none" || s.empty()) return StateOverride::kNone;
  if (s == "Safe") return StateOverride::kSafe;
  if (s == "Hazardous") return StateOverride::kHazardous;
  if (s == "Dangerous") return StateOverride::kDangerous;
  return std::nullopt;
}

std::optional<safety::SafetyState> to_safety_state(StateOverride o) {
  switch (o) {
    case StateOverride::kSafe: return safety::SafetyState::kSafe;
    case StateOverride::kHazardous: return safety::SafetyState::kHazardous;
    case StateOverride::kDangerous: return safety::SafetyState::kDangerous;
    case StateOverride::kNone: break;
  }
  return std::nullopt;
}

MessageType type_of(const Message& m) {
  return static_cast<MessageType>(m.index() + 1);
}

const MessageHeader& header_of(const Message& m) {
  return std::visit([](const auto& v) -> const MessageHeader& { return v.header; }, m);
}

MessageHeader& header_of(Message& m) {
  return std::visit([](auto& v) -> MessageHeader& { return v.header; }, m);
}

bool is_valid_utf8(std::string_view bytes) {
  std::size_t i = 0;
  const std::size_t n = bytes.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(bytes[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    std::uint32_t min = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2, cp = c & 0x1F, min = 0x80;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3, cp = c & 0x0F, min = 0x800;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4, cp = c & 0x07, min = 0x10000;
    } else {
      return false;
    }
    if (n - i < len) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(bytes[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += len;
  }
  return true;
}

}  // namespace v2i::wire
