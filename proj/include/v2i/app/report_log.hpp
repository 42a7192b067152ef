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

#ifndef V2I_APP_REPORT_LOG_HPP_
#define V2I_APP_REPORT_LOG_HPP_

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "v2i/safety/tracker.hpp"
#include "v2i/scene/scene_frame.hpp"
#include "v2i/wire/messages.hpp"

namespace v2i::app {

inline constexpr int kReportSchemaVersion = 1;

// One JSONL line per frame; schema in docs/report_log.md. Non-finite TTC or
// THW is written as null.
std::string report_to_json_line(const safety::SafetyReport& report,
                                std::optional<safety::SafetyState> effective = std::nullopt);

// Throws Errc::kParseError with `line_no`.
safety::SafetyReport parse_report_line(const std::string& line, std::size_t line_no);

std::vector<safety::SafetyReport> read_report_log(const std::filesystem::path& path);

// Writes whole lines only; flush() after each frame keeps the file free of
// partial records on interruption.
class ReportLogWriter {
 public:
  explicit ReportLogWriter(const std::filesystem::path& path);
  void write(const safety::SafetyReport& report,
             std::optional<safety::SafetyState> effective = std::nullopt);
  void flush();

 private:
  std::ofstream out_;
};

// Telemetry for one frame: ego pose from the frame, one record per object
// seen in this frame. Lost (stale) tracks are not sent.
wire::TelemetryMessage make_telemetry(const scene::SceneFrame& frame,
                                      const safety::SafetyReport& report,
                                      std::uint32_t seq, std::uint64_t timestamp_us);

}  // namespace v2i::app

#endif  // V2I_APP_REPORT_LOG_HPP_
