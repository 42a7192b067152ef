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

#ifndef V2I_APP_VEHICLE_AGENT_HPP_
#define V2I_APP_VEHICLE_AGENT_HPP_

#include <array>
#include <atomic>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <vector>

#include "v2i/app/config.hpp"
#include "v2i/app/display.hpp"
#include "v2i/safety/tracker.hpp"
#include "v2i/scene/scene_frame.hpp"
#include "v2i/wire/session.hpp"
#include "v2i/wire/transport.hpp"

namespace v2i::app {

struct FrameRecord {
  std::uint64_t frame_index = 0;
  std::optional<std::uint32_t> seq;  // telemetry seq, if sent
  std::uint64_t start_us = 0;        // wall clock when processing began
  double processing_ms = 0.0;        // tracker through send and logging
};

struct AgentSummary {
  std::uint64_t frames = 0;
  std::uint64_t telemetry_sent = 0;
  std::uint64_t downlink_received = 0;
  std::uint64_t downlink_malformed = 0;
  std::uint64_t operator_messages = 0;
  double mean_frame_ms = 0.0;
  double max_frame_ms = 0.0;
  // Frames per effective state (Safe, Hazardous, Dangerous).
  std::array<std::uint64_t, 3> state_frames{};
  std::optional<std::uint32_t> collision_with;
  bool twin_acknowledged = false;
  bool interrupted = false;
};

// Frame loop on the caller's thread, downlink receiver and session upkeep on
// a second thread. The display state is the only datum they share.
class VehicleAgent {
 public:
  VehicleAgent(AgentConfig cfg, std::unique_ptr<scene::FrameSource> source,
               std::unique_ptr<wire::DatagramSocket> socket, std::ostream* dashboard);
  ~VehicleAgent();

  // Keep every report and sent telemetry message in memory.
  void set_capture(bool on) { capture_ = on; }

  // Returns when the source is exhausted (plus the linger period) or `stop`
  // becomes true. Throws on source or tracker errors.
  AgentSummary run(const std::atomic<bool>& stop);

  OnboardDisplayState& display() { return display_; }
  const std::vector<safety::SafetyReport>& reports() const { return reports_; }
  const std::vector<wire::TelemetryMessage>& sent() const { return sent_; }
  const std::vector<FrameRecord>& frame_records() const { return records_; }

 private:
  void receive_loop();
  void send(const wire::Message& msg);
  void print(const std::string& line);

  AgentConfig cfg_;
  std::unique_ptr<scene::FrameSource> source_;
  std::unique_ptr<wire::DatagramSocket> socket_;
  std::ostream* dashboard_;
  safety::Tracker tracker_;
  OnboardDisplayState display_;

  std::mutex session_mu_;
  wire::VehicleSession session_;
  std::mutex print_mu_;

  std::atomic<bool> receiving_{false};
  std::atomic<std::uint64_t> downlink_received_{0};
  std::atomic<std::uint64_t> downlink_malformed_{0};
  std::atomic<std::uint64_t> operator_messages_{0};
  std::atomic<bool> acknowledged_{false};

  bool capture_ = false;
  std::vector<safety::SafetyReport> reports_;
  std::vector<wire::TelemetryMessage> sent_;
  std::vector<FrameRecord> records_;
};

}  // namespace v2i::app

#endif  // V2I_APP_VEHICLE_AGENT_HPP_
