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

#ifndef V2I_SCENE_SCENARIO_HPP_
#define V2I_SCENE_SCENARIO_HPP_

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "v2i/geometry/geometry.hpp"
#include "v2i/scene/scene_frame.hpp"

namespace v2i::scene {

// Piecewise-linear speed over time. Held constant before the first knot and
// after the last one.
class SpeedProfile {
 public:
  SpeedProfile() = default;
  explicit SpeedProfile(std::vector<std::pair<double, double>> knots);
  static SpeedProfile constant(double speed_mps);

  double speed_at(double t_s) const;
  // Exact integral of speed_at over [0, t_s].
  double distance_at(double t_s) const;

  const std::vector<std::pair<double, double>>& knots() const { return knots_; }

 private:
  std::vector<std::pair<double, double>> knots_;
};

struct ClassGeometry {
  double length_m;
  double width_m;
  double height_m;
  // Offsets added to the gap for each bbox edge sample.
  EdgeDepths edge_offsets;
  double confidence;
};

const ClassGeometry& class_geometry(ObjectClass c);

struct ActorSpec {
  std::uint32_t id = 1;
  ObjectClass object_class = ObjectClass::kCar;
  double initial_gap_m = 30.0;
  SpeedProfile speed;
  double lateral_offset_m = 0.0;
  double lateral_speed_mps = 0.0;
  // Visibility window in scenario time; outside it the actor is not detected
  // and cannot collide.
  double enter_s = 0.0;
  double exit_s = std::numeric_limits<double>::infinity();
};

struct ScenarioSpec {
  std::string name = "scenario";
  double duration_s = 10.0;
  double fps = 20.0;
  double camera_height_m = 1.5;
  geo::GeoOrigin origin;
  SpeedProfile ego_speed;
  std::vector<ActorSpec> actors;

  // Throws Errc::kInvalidArgument.
  void validate() const;
  std::size_t frame_count() const;
};

ScenarioSpec load_scenario_spec(const std::filesystem::path& path);
ScenarioSpec parse_scenario_spec(const std::string& json_text);

// Deterministic frame synthesis. Gaps follow the exact integral of the
// speed profiles; a gap reaching <= 0 for a visible actor emits one marker
// frame with `collision_with` set and ends the stream.
class ScenarioGenerator : public FrameSource {
 public:
  ScenarioGenerator(ScenarioSpec spec, geo::CameraIntrinsics intr);

  std::optional<SceneFrame> next() override;

  double gap_at(const ActorSpec& actor, double t_s) const;

 private:
  ScenarioSpec spec_;
  geo::CameraIntrinsics intr_;
  std::size_t frame_ = 0;
  bool done_ = false;
};

std::vector<SceneFrame> generate_scenario(const ScenarioSpec& spec,
                                          const geo::CameraIntrinsics& intr);

// Built-in fixtures used by the demos and the acceptance suite.
ScenarioSpec constant_gap_scenario();
ScenarioSpec deceleration_scenario();
ScenarioSpec pedestrian_crossing_scenario();

}  // namespace v2i::scene

#endif  // V2I_SCENE_SCENARIO_HPP_
