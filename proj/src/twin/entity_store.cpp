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

#include "v2i/twin/entity_store.hpp"

#include <algorithm>

#include "v2i/error.hpp"

namespace v2i::twin {

void TwinConfig::validate() const {
  if (entity_ttl_ms == 0) throw Error(Errc::kInvalidArgument, "entity_ttl_ms must be > 0");
  origin.validate();
  thresholds.validate();
}

EntityStore::EntityStore(TwinConfig cfg) : cfg_(cfg) { cfg_.validate(); }

StoreDiff EntityStore::apply_telemetry(const wire::TelemetryMessage& msg,
                                       std::uint64_t recv_ts_us) {
  StoreDiff diff;
  ego_.has_pose = true;
  ego_.lat = msg.ego_lat;
  ego_.lon = msg.ego_lon;
  ego_.world_pos = geo::geo_to_local(msg.ego_lat, msg.ego_lon, cfg_.origin);
  ego_.yaw_deg = msg.ego_yaw_deg;
  ego_.speed_mps = msg.ego_speed_mps;
  ego_.vehicle_overall_state = msg.overall_state;
  ego_.last_update_us = std::max(ego_.last_update_us, recv_ts_us);
  ego_.last_seq = msg.header.seq;

  const geo::EulerZXY pose{0.0, 0.0, geo::deg_to_rad(msg.ego_yaw_deg)};
  for (auto& [id, e] : entities_) e.stale = true;

  for (const auto& rec : msg.objects) {
    auto [it, inserted] = entities_.try_emplace(rec.id);
    Entity& e = it->second;
    (inserted ? diff.spawned : diff.updated).push_back(rec.id);
    e.object_id = rec.id;
    e.object_class = rec.object_class;
    e.rel_x = rec.rel_x;
    e.rel_y = rec.rel_y;
    e.rel_z = rec.rel_z;
    e.world_pos = geo::relative_to_world(ego_.world_pos, pose,
                                         geo::CameraPoint{rec.rel_x, rec.rel_y, rec.rel_z},
                                         cfg_.offset_sign);
    e.yaw_deg = rec.yaw_deg;
    e.abs_speed_mps = rec.abs_speed_mps;
    e.ttc_s = rec.ttc_s;
    e.thw_s = rec.thw_s;
    e.vehicle_state = rec.state;
    e.state = safety::classify(rec.ttc_s, rec.thw_s, cfg_.thresholds);
    e.last_update_us = std::max(e.last_update_us, recv_ts_us);
    e.last_seq = msg.header.seq;
    e.stale = false;
  }

  diff.removed = expire(recv_ts_us);
  // A record repeated within one message counts once; the last copy wins.
  std::sort(diff.spawned.begin(), diff.spawned.end());
  diff.spawned.erase(std::unique(diff.spawned.begin(), diff.spawned.end()), diff.spawned.end());
  std::sort(diff.updated.begin(), diff.updated.end());
  diff.updated.erase(std::unique(diff.updated.begin(), diff.updated.end()), diff.updated.end());
  std::erase_if(diff.updated, [&](std::uint32_t id) {
    return std::binary_search(diff.spawned.begin(), diff.spawned.end(), id);
  });
  ++applied_;
  return diff;
}

std::vector<std::uint32_t> EntityStore::expire(std::uint64_t now_us) {
  std::vector<std::uint32_t> removed;
  const std::uint64_t ttl_us = cfg_.entity_ttl_ms * 1000;
  for (auto it = entities_.begin(); it != entities_.end();) {
    if (now_us > it->second.last_update_us && now_us - it->second.last_update_us > ttl_us) {
      removed.push_back(it->first);
      it = entities_.erase(it);
    } else {
      ++it;
    }
  }
  safety::SafetyState overall = safety::SafetyState::kSafe;
  for (const auto& [id, e] : entities_) {
    if (!e.stale) overall = safety::worst(overall, e.state);
  }
  ego_.overall_state = overall;
  return removed;
}

void EntityStore::set_link(bool connected, const wire::LinkMonitor::Snapshot& link) {
  ego_.connected = connected;
  ego_.link = link;
}

TwinSnapshot EntityStore::snapshot() const {
  TwinSnapshot s;
  s.ego = ego_;
  s.telemetry_applied = applied_;
  s.entities.reserve(entities_.size());
  for (const auto& [id, e] : entities_) s.entities.push_back(e);
  return s;
}

bool out_of_order_filter(std::uint32_t last_seq, std::uint32_t msg_seq) {
  const std::uint32_t delta = msg_seq - last_seq;
  return delta != 0 && delta < 0x8000'0000U;
}

}  // namespace v2i::twin
