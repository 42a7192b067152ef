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

#include "v2i/scene/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "v2i/error.hpp"

namespace v2i::scene {

namespace {

using nlohmann::json;

void require(bool condition, const std::string& what) {
  if (!condition) throw Error(Errc::kInvalidArgument, what);
}

SpeedProfile parse_profile(const json& j) {
  if (const auto it = j.find("speed_mps"); it != j.end()) {
    return SpeedProfile::constant(it->get<double>());
  }
  std::vector<std::pair<double, double>> knots;
  for (const auto& k : j.at("speed_profile")) {
    if (!k.is_array() || k.size() != 2) {
      throw std::invalid_argument("speed_profile entries must be [t_s, speed_mps]");
    }
    knots.emplace_back(k[0].get<double>(), k[1].get<double>());
  }
  return SpeedProfile(std::move(knots));
}

}  // namespace

SpeedProfile::SpeedProfile(std::vector<std::pair<double, double>> knots)
    : knots_(std::move(knots)) {
  require(!knots_.empty(), "speed profile needs at least one knot");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    const auto [t, v] = knots_[i];
    require(std::isfinite(t) && t >= 0.0, "speed profile knot times must be >= 0");
    require(std::isfinite(v) && v >= 0.0, "speed profile speeds must be >= 0");
    if (i > 0) require(t > knots_[i - 1].first, "speed profile knot times must increase");
  }
}

SpeedProfile SpeedProfile::constant(double speed_mps) {
  return SpeedProfile({{0.0, speed_mps}});
}

double SpeedProfile::speed_at(double t_s) const {
  if (knots_.empty()) return 0.0;
  if (t_s <= knots_.front().first) return knots_.front().second;
  if (t_s >= knots_.back().first) return knots_.back().second;
  const auto hi = std::upper_bound(
      knots_.begin(), knots_.end(), t_s,
      [](double t, const std::pair<double, double>& k) { return t < k.first; });
  const auto lo = hi - 1;
  const double w = (t_s - lo->first) / (hi->first - lo->first);
  return lo->second + w * (hi->second - lo->second);
}

double SpeedProfile::distance_at(double t_s) const {
  if (knots_.empty() || t_s <= 0.0) return 0.0;
  // Trapezoids are exact on each linear piece; split at every knot inside
  // (0, t_s).
  double total = 0.0;
  double prev_t = 0.0;
  double prev_v = speed_at(0.0);
  for (const auto& [kt, kv] : knots_) {
    if (kt <= prev_t) continue;
    if (kt >= t_s) break;
    total += 0.5 * (prev_v + kv) * (kt - prev_t);
    prev_t = kt;
    prev_v = kv;
  }
  total += 0.5 * (prev_v + speed_at(t_s)) * (t_s - prev_t);
  return total;
}

const ClassGeometry& class_geometry(ObjectClass c) {
  // Car: rear window slopes away from the camera, so the top edge reads
  // deeper than the bumper. Pedestrian: seen side-on while crossing.
  static const ClassGeometry kCar{4.5, 1.8, 1.5, {0.40, 0.0, 0.0, 0.0}, 0.85};
  static const ClassGeometry kPedestrian{0.5, 0.5, 1.7, {0.0, 0.0, 0.15, 0.0}, 0.80};
  return c == ObjectClass::kCar ? kCar : kPedestrian;
}

void ScenarioSpec::validate() const {
  require(std::isfinite(duration_s) && duration_s > 0.0, "duration_s must be > 0");
  require(std::isfinite(fps) && fps > 0.0, "fps must be > 0");
  require(std::isfinite(camera_height_m) && camera_height_m > 0.0,
          "camera_height_m must be > 0");
  require(!ego_speed.knots().empty(), "ego speed profile missing");
  origin.validate();
  std::set<std::uint32_t> ids;
  for (const auto& a : actors) {
    const auto tag = "actor " + std::to_string(a.id) + ": ";
    require(ids.insert(a.id).second, tag + "duplicate id");
    require(std::isfinite(a.initial_gap_m) && a.initial_gap_m > 0.0, tag + "gap must be > 0");
    require(!a.speed.knots().empty(), tag + "speed profile missing");
    require(std::isfinite(a.lateral_offset_m) && std::isfinite(a.lateral_speed_mps),
            tag + "lateral motion must be finite");
    require(a.enter_s >= 0.0 && a.exit_s > a.enter_s, tag + "visibility window empty");
  }
}

std::size_t ScenarioSpec::frame_count() const {
  return static_cast<std::size_t>(std::llround(duration_s * fps));
}

ScenarioSpec parse_scenario_spec(const std::string& json_text) {
  ScenarioSpec spec;
  try {
    const json j = json::parse(json_text);
    spec.name = j.value("name", spec.name);
    spec.duration_s = j.at("duration_s").get<double>();
    spec.fps = j.value("fps", spec.fps);
    spec.camera_height_m = j.value("camera_height_m", spec.camera_height_m);
    if (const auto it = j.find("origin"); it != j.end()) {
      spec.origin.lat0 = it->at("lat").get<double>();
      spec.origin.lon0 = it->at("lon").get<double>();
    }
    spec.ego_speed = parse_profile(j.at("ego"));
    for (const auto& a : j.value("actors", json::array())) {
      ActorSpec actor;
      actor.id = a.at("id").get<std::uint32_t>();
      const auto cls = object_class_from_string(a.at("class").get<std::string>());
      if (!cls) throw std::invalid_argument("unknown actor class");
      actor.object_class = *cls;
      actor.initial_gap_m = a.at("initial_gap_m").get<double>();
      actor.speed = parse_profile(a);
      actor.lateral_offset_m = a.value("lateral_offset_m", 0.0);
      actor.lateral_speed_mps = a.value("lateral_speed_mps", 0.0);
      actor.enter_s = a.value("enter_s", 0.0);
      if (const auto it = a.find("exit_s"); it != a.end() && !it->is_null()) {
        actor.exit_s = it->get<double>();
      }
      spec.actors.push_back(std::move(actor));
    }
  } catch (const json::exception& e) {
    throw Error(Errc::kParseError, std::string("scenario spec: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(Errc::kParseError, std::string("scenario spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

ScenarioSpec load_scenario_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario_spec(ss.str());
}

ScenarioGenerator::ScenarioGenerator(ScenarioSpec spec, geo::CameraIntrinsics intr)
    : spec_(std::move(spec)), intr_(intr) {
  spec_.validate();
  intr_.validate();
}

double ScenarioGenerator::gap_at(const ActorSpec& actor, double t_s) const {
  return actor.initial_gap_m + actor.speed.distance_at(t_s) -
         spec_.ego_speed.distance_at(t_s);
}

std::optional<SceneFrame> ScenarioGenerator::next() {
  if (done_ || frame_ >= spec_.frame_count()) return std::nullopt;
  const std::size_t n = frame_++;
  const double t = static_cast<double>(n) / spec_.fps;

  SceneFrame frame;
  frame.frame_index = n;
  frame.timestamp_us =
      static_cast<std::uint64_t>(std::llround(static_cast<double>(n) * 1e6 / spec_.fps));
  frame.ego_speed_mps = spec_.ego_speed.speed_at(t);
  const auto pos = geo::local_to_geo({0.0, spec_.ego_speed.distance_at(t), 0.0}, spec_.origin);
  frame.ego_lat = pos.lat;
  frame.ego_lon = pos.lon;
  // Straight north heading, yaw counter-clockwise from east.
  frame.ego_yaw_deg = 90.0;

  const double f = intr_.focal_px;
  for (const auto& actor : spec_.actors) {
    if (t < actor.enter_s || t >= actor.exit_s) continue;
    const double gap = gap_at(actor, t);
    if (gap <= 0.0) {
      frame.detections.clear();
      frame.collision_with = actor.id;
      done_ = true;
      return frame;
    }
    const auto& g = class_geometry(actor.object_class);
    const double lateral = actor.lateral_offset_m + actor.lateral_speed_mps * t;
    const double u_c = intr_.principal_u + f * lateral / gap;
    const double half_w = 0.5 * f * g.width_m / gap;

    Detection d;
    d.object_id = actor.id;
    d.object_class = actor.object_class;
    d.bbox = {u_c - half_w,
              intr_.principal_v + f * (spec_.camera_height_m - g.height_m) / gap,
              u_c + half_w, intr_.principal_v + f * spec_.camera_height_m / gap};
    d.confidence = g.confidence;
    d.depth_center_m = gap;
    d.edges = EdgeDepths{gap + g.edge_offsets.top_m, gap + g.edge_offsets.bottom_m,
                         gap + g.edge_offsets.left_m, gap + g.edge_offsets.right_m};
    frame.detections.push_back(d);
  }
  return frame;
}

std::vector<SceneFrame> generate_scenario(const ScenarioSpec& spec,
                                          const geo::CameraIntrinsics& intr) {
  ScenarioGenerator gen(spec, intr);
  return drain(gen);
}

ScenarioSpec constant_gap_scenario() {
  ScenarioSpec s;
  s.name = "constant-gap";
  s.duration_s = 10.0;
  s.origin = {30.0, 31.0};
  s.ego_speed = SpeedProfile::constant(8.0);
  ActorSpec car;
  car.id = 1;
  car.initial_gap_m = 30.0;
  car.speed = SpeedProfile::constant(8.0);
  s.actors.push_back(car);
  return s;
}

ScenarioSpec deceleration_scenario() {
  ScenarioSpec s;
  s.name = "deceleration";
  s.duration_s = 11.0;
  s.origin = {30.0, 31.0};
  s.ego_speed = SpeedProfile::constant(8.0);
  ActorSpec car;
  car.id = 1;
  car.initial_gap_m = 30.0;
  // Paces the ego for 2 s, then brakes at 1 m/s^2.
  car.speed = SpeedProfile({{0.0, 8.0}, {2.0, 8.0}, {10.0, 0.0}});
  // Ego swerves out of the lane before the gap closes.
  car.exit_s = 9.2;
  s.actors.push_back(car);
  return s;
}

ScenarioSpec pedestrian_crossing_scenario() {
  ScenarioSpec s;
  s.name = "pedestrian-crossing";
  s.duration_s = 8.0;
  s.origin = {30.0, 31.0};
  s.ego_speed = SpeedProfile({{0.0, 5.0}, {2.0, 5.0}, {4.5, 0.0}});
  ActorSpec ped;
  ped.id = 7;
  ped.object_class = ObjectClass::kPedestrian;
  ped.initial_gap_m = 25.0;
  ped.speed = SpeedProfile::constant(0.0);
  ped.lateral_offset_m = -4.0;
  ped.lateral_speed_mps = 1.2;
  ped.exit_s = 7.0;
  s.actors.push_back(ped);
  return s;
}

}  // namespace v2i::scene
