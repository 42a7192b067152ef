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

#ifndef V2I_TWIN_ENTITY_STORE_HPP_
#define V2I_TWIN_ENTITY_STORE_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "v2i/geometry/geometry.hpp"
#include "v2i/safety/metrics.hpp"
#include "v2i/scene/scene_frame.hpp"
#include "v2i/wire/link_stats.hpp"
#include "v2i/wire/messages.hpp"

namespace v2i::twin {

struct TwinConfig {
  std::uint64_t entity_ttl_ms = 1000;
  geo::GeoOrigin origin;
  safety::SafetyThresholds thresholds;
  geo::OffsetSign offset_sign = geo::OffsetSign::kSubtract;

  void validate() const;
};

// Received f32 payloads are kept as-is so they can be compared bitwise with
// what the vehicle sent.
struct Entity {
  std::uint32_t object_id = 0;
  scene::ObjectClass object_class = scene::ObjectClass::kCar;
  geo::WorldPoint world_pos;
  float rel_x = 0.0F;
  float rel_y = 0.0F;
  float rel_z = 0.0F;
  float yaw_deg = 0.0F;
  float abs_speed_mps = 0.0F;
  float ttc_s = 0.0F;
  float thw_s = 0.0F;
  safety::SafetyState state = safety::SafetyState::kSafe;          // twin classification
  safety::SafetyState vehicle_state = safety::SafetyState::kSafe;  // as reported
  std::uint64_t last_update_us = 0;
  std::uint32_t last_seq = 0;
  // Not present in the most recent telemetry; values are the last received.
  bool stale = false;
};

struct EgoEntity {
  bool has_pose = false;
  geo::WorldPoint world_pos;
  double lat = 0.0;
  double lon = 0.0;
  float yaw_deg = 0.0F;
  float speed_mps = 0.0F;
  safety::SafetyState overall_state = safety::SafetyState::kSafe;
  safety::SafetyState vehicle_overall_state = safety::SafetyState::kSafe;
  std::uint64_t last_update_us = 0;
  std::uint32_t last_seq = 0;
  bool connected = false;
  wire::LinkMonitor::Snapshot link;
};

struct StoreDiff {
  std::vector<std::uint32_t> spawned;
  std::vector<std::uint32_t> updated;
  std::vector<std::uint32_t> removed;
};

struct TwinSnapshot {
  EgoEntity ego;
  std::vector<Entity> entities;  // ascending object_id
  std::uint64_t telemetry_applied = 0;
};

class EntityStore {
 public:
  explicit EntityStore(TwinConfig cfg = {});

  // `recv_ts_us` is a monotonic receive time. Spawns or updates every object
  // in `msg`, then removes entities not updated within entity_ttl_ms.
  StoreDiff apply_telemetry(const wire::TelemetryMessage& msg, std::uint64_t recv_ts_us);

  // Maintenance pass without new telemetry; returns removed ids.
  std::vector<std::uint32_t> expire(std::uint64_t now_us);

  void set_link(bool connected, const wire::LinkMonitor::Snapshot& link);

  TwinSnapshot snapshot() const;
  std::size_t size() const { return entities_.size(); }
  const TwinConfig& config() const { return cfg_; }

 private:
  TwinConfig cfg_;
  EgoEntity ego_;
  std::map<std::uint32_t, Entity> entities_;
  std::uint64_t applied_ = 0;
};

// Serial-number comparison over a 2^31 window.
bool out_of_order_filter(std::uint32_t last_seq, std::uint32_t msg_seq);

}  // namespace v2i::twin

#endif  // V2I_TWIN_ENTITY_STORE_HPP_
