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

#ifndef V2I_SCENE_SCENE_LOG_HPP_
#define V2I_SCENE_SCENE_LOG_HPP_

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "v2i/geometry/geometry.hpp"
#include "v2i/scene/scene_frame.hpp"

namespace v2i::scene {

inline constexpr int kSceneLogSchema = 1;

// Serializes one frame as a single JSONL line (no trailing newline).
// Depths are always written in meters.
std::string to_json_line(const SceneFrame& frame);

// Parses one JSONL line. Detections may carry depths in meters, in
// millimeters (frame-level "depth_unit": "mm") or as stereo disparities
// ("disparity_*_px"), which are converted with `intr` and tilt-compensated.
// Throws Errc::kParseError with `line_no` on any malformed or invalid input.
SceneFrame parse_json_line(std::string_view line, std::size_t line_no,
                           const geo::CameraIntrinsics& intr);

// Streams frames from a JSONL scene log, enforcing strictly increasing
// timestamps (Errc::kStreamOrder). Blank lines are skipped.
class SceneLogReader : public FrameSource {
 public:
  explicit SceneLogReader(const std::filesystem::path& path,
                          geo::CameraIntrinsics intr = {});

  std::optional<SceneFrame> next() override;

 private:
  std::ifstream in_;
  geo::CameraIntrinsics intr_;
  std::size_t line_no_ = 0;
  std::optional<std::uint64_t> last_ts_;
};

class SceneLogWriter {
 public:
  explicit SceneLogWriter(const std::filesystem::path& path);

  void write(const SceneFrame& frame);
  void flush();

 private:
  std::ofstream out_;
  std::filesystem::path path_;
};

std::vector<SceneFrame> replay_log(const std::filesystem::path& path,
                                   const geo::CameraIntrinsics& intr = {});

void write_log(const std::vector<SceneFrame>& frames,
               const std::filesystem::path& path);

}  // namespace v2i::scene

#endif  // V2I_SCENE_SCENE_LOG_HPP_
