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

#include "v2i/wire/codec.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "v2i/error.hpp"

namespace v2i::wire {

namespace {

class Writer {
 public:
  explicit Writer(std::size_t reserve) { buf_.reserve(reserve); }

  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void bytes(std::string_view s) { buf_.insert(buf_.end(), s.begin(), s.end()); }

  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  void put(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  std::vector<std::uint8_t> buf_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  float f32() { return std::bit_cast<float>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }

  std::string text(std::size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(in_.data() + pos_), n);
    pos_ += n;
    return s;
  }

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) {
      throw Error(Errc::kTruncated, "field at offset " + std::to_string(pos_) + " needs " +
                                        std::to_string(n) + " bytes",
                  pos_);
    }
  }

  std::uint64_t get(std::size_t width) {
    need(width);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
    }
    pos_ += width;
    return v;
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

bool positive_or_inf(float v) { return v > 0.0F && !std::isnan(v); }

// Returns a description of the first violated invariant, or empty.
std::string check(const Message& msg) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, TelemetryMessage>) {
          if (!(std::abs(m.ego_lat) <= 90.0)) return "ego_lat out of range";
          if (!(std::abs(m.ego_lon) <= 180.0)) return "ego_lon out of range";
          if (!std::isfinite(m.ego_yaw_deg)) return "ego_yaw_deg not finite";
          if (!(std::isfinite(m.ego_speed_mps) && m.ego_speed_mps >= 0.0F)) {
            return "ego_speed_mps must be finite and >= 0";
          }
          if (static_cast<std::uint8_t>(m.overall_state) > 2) return "bad overall_state";
          if (m.objects.size() > kMaxObjects) return "more than 255 objects";
          for (const auto& o : m.objects) {
            const auto cls = static_cast<std::uint8_t>(o.object_class);
            if (cls < 1 || cls > 2) return "bad object class";
            if (static_cast<std::uint8_t>(o.state) > 2) return "bad object state";
            if (!(std::isfinite(o.rel_x) && std::isfinite(o.rel_y) && std::isfinite(o.rel_z))) {
              return "relative position not finite";
            }
            if (!(std::isfinite(o.abs_speed_mps) && o.abs_speed_mps >= 0.0F)) {
              return "abs_speed_mps must be finite and >= 0";
            }
            if (!std::isfinite(o.yaw_deg)) return "yaw_deg not finite";
            if (!positive_or_inf(o.ttc_s)) return "ttc_s must be > 0 or +inf";
            if (!positive_or_inf(o.thw_s)) return "thw_s must be > 0 or +inf";
          }
        } else if constexpr (std::is_same_v<T, OperatorMessage>) {
          if (static_cast<std::uint8_t>(m.severity) > 2) return "bad severity";
          if (static_cast<std::uint8_t>(m.state_override) > 3) return "bad state_override";
          if (m.text.size() > kMaxTextBytes) return "text longer than 512 bytes";
          if (!is_valid_utf8(m.text)) return "text is not valid UTF-8";
        }
        return {};
      },
      msg);
}

void write_header(Writer& w, MessageType type, const MessageHeader& h) {
  for (auto b : kMagic) w.u8(b);
  w.u8(kVersion);
  w.u8(static_cast<std::uint8_t>(type));
  w.u32(h.seq);
  w.u64(h.timestamp_us);
}

[[noreturn]] void malformed(const std::string& what) { throw Error(Errc::kMalformed, what); }

}  // namespace

void validate(const Message& msg) {
  if (auto problem = check(msg); !problem.empty()) {
    throw Error(Errc::kEncodeError, problem);
  }
}

std::vector<std::uint8_t> encode(const Message& msg) {
  validate(msg);
  Writer w(kHeaderSize + kTelemetryFixedSize + 8 * kObjectRecordSize);
  write_header(w, type_of(msg), header_of(msg));
  std::visit(
      [&w](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, TelemetryMessage>) {
          w.f64(m.ego_lat);
          w.f64(m.ego_lon);
          w.f32(m.ego_yaw_deg);
          w.f32(m.ego_speed_mps);
          w.u8(static_cast<std::uint8_t>(m.overall_state));
          w.u8(static_cast<std::uint8_t>(m.objects.size()));
          for (const auto& o : m.objects) {
            w.u32(o.id);
            w.u8(static_cast<std::uint8_t>(o.object_class));
            w.f32(o.rel_x);
            w.f32(o.rel_y);
            w.f32(o.rel_z);
            w.f32(o.abs_speed_mps);
            w.f32(o.yaw_deg);
            w.f32(o.ttc_s);
            w.f32(o.thw_s);
            w.u8(static_cast<std::uint8_t>(o.state));
          }
        } else if constexpr (std::is_same_v<T, OperatorMessage>) {
          w.u8(static_cast<std::uint8_t>(m.severity));
          w.u8(static_cast<std::uint8_t>(m.state_override));
          w.u16(static_cast<std::uint16_t>(m.text.size()));
          w.bytes(m.text);
        } else if constexpr (std::is_same_v<T, AckMessage>) {
          w.u32(m.acked_seq);
          w.u64(m.echoed_timestamp_us);
        }
      },
      msg);
  return w.take();
}

Message decode(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  for (std::size_t i = 0; i < kMagic.size(); ++i) {
    if (i >= bytes.size()) {
      throw Error(Errc::kTruncated, "magic cut short", 0);
    }
    if (bytes[i] != kMagic[i]) throw Error(Errc::kNotOurProtocol, "bad magic");
  }
  r.u32();
  const auto version = r.u8();
  if (version != kVersion) {
    throw Error(Errc::kVersionMismatch, "version " + std::to_string(version));
  }
  const auto type = r.u8();
  if (type < 1 || type > 5) malformed("unknown message type " + std::to_string(type));
  MessageHeader header;
  header.seq = r.u32();
  header.timestamp_us = r.u64();

  Message msg;
  switch (static_cast<MessageType>(type)) {
    case MessageType::kTelemetry: {
      TelemetryMessage m;
      m.header = header;
      m.ego_lat = r.f64();
      m.ego_lon = r.f64();
      m.ego_yaw_deg = r.f32();
      m.ego_speed_mps = r.f32();
      const auto overall = r.u8();
      if (overall > 2) malformed("bad overall_state");
      m.overall_state = static_cast<safety::SafetyState>(overall);
      const auto count = r.u8();
      m.objects.reserve(count);
      for (unsigned i = 0; i < count; ++i) {
        ObjectRecord o;
        o.id = r.u32();
        const auto cls = r.u8();
        if (cls < 1 || cls > 2) malformed("bad object class");
        o.object_class = static_cast<scene::ObjectClass>(cls);
        o.rel_x = r.f32();
        o.rel_y = r.f32();
        o.rel_z = r.f32();
        o.abs_speed_mps = r.f32();
        o.yaw_deg = r.f32();
        o.ttc_s = r.f32();
        o.thw_s = r.f32();
        const auto state = r.u8();
        if (state > 2) malformed("bad object state");
        o.state = static_cast<safety::SafetyState>(state);
        m.objects.push_back(o);
      }
      msg = std::move(m);
      break;
    }
    case MessageType::kOperatorAlert: {
      OperatorMessage m;
      m.header = header;
      const auto severity = r.u8();
      if (severity > 2) malformed("bad severity");
      m.severity = static_cast<Severity>(severity);
      const auto override_state = r.u8();
      if (override_state > 3) malformed("bad state_override");
      m.state_override = static_cast<StateOverride>(override_state);
      const auto len = r.u16();
      if (len > kMaxTextBytes) malformed("text_len " + std::to_string(len) + " > 512");
      m.text = r.text(len);
      msg = std::move(m);
      break;
    }
    case MessageType::kHello:
      msg = HelloMessage{header};
      break;
    case MessageType::kHeartbeat:
      msg = HeartbeatMessage{header};
      break;
    case MessageType::kAck: {
      AckMessage m;
      m.header = header;
      m.acked_seq = r.u32();
      m.echoed_timestamp_us = r.u64();
      msg = m;
      break;
    }
  }
  if (r.remaining() != 0) {
    malformed(std::to_string(r.remaining()) + " trailing bytes");
  }
  if (auto problem = check(msg); !problem.empty()) malformed(problem);
  return msg;
}

}  // namespace v2i::wire
