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

#include "v2i/geometry/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "v2i/error.hpp"

namespace v2i::geo {

namespace {

void require(bool condition, const char* what) {
  if (!condition) {
    throw Error(Errc::kInvalidArgument, what);
  }
}

}  // namespace

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

void CameraIntrinsics::validate() const {
  require(std::isfinite(focal_px) && focal_px > 0.0, "focal_px must be > 0");
  require(std::isfinite(baseline_m) && baseline_m > 0.0,
          "baseline_m must be > 0");
  require(std::isfinite(principal_u) && std::isfinite(principal_v),
          "principal point must be finite");
  require(std::isfinite(tilt_deg) && tilt_deg >= 0.0 && tilt_deg < 90.0,
          "tilt_deg must lie in [0, 90)");
}

void GeoOrigin::validate() const {
  require(std::abs(lat0) <= 90.0, "lat0 out of range");
  require(std::abs(lon0) <= 180.0, "lon0 out of range");
  require(std::isfinite(earth_radius_m) && earth_radius_m > 0.0,
          "earth_radius_m must be > 0");
}

double disparity_to_depth(double disparity_px, const CameraIntrinsics& intr) {
  if (!std::isfinite(disparity_px) || disparity_px <= 0.0) {
    throw Error(Errc::kDegenerateDisparity,
                "disparity " + std::to_string(disparity_px) + " px");
  }
  return intr.focal_px * intr.baseline_m / disparity_px;
}

double tilt_compensate(double depth_m, const CameraIntrinsics& intr) {
  require(std::isfinite(depth_m) && depth_m > 0.0, "depth must be > 0");
  return depth_m * std::cos(deg_to_rad(intr.tilt_deg));
}

CameraPoint pixel_to_camera(double u, double v, double depth_m,
                            const CameraIntrinsics& intr) {
  require(std::isfinite(depth_m) && depth_m > 0.0, "depth must be > 0");
  return CameraPoint{(u - intr.principal_u) * depth_m / intr.focal_px,
                     (v - intr.principal_v) * depth_m / intr.focal_px,
                     depth_m};
}

Mat3 rotation_zxy(const EulerZXY& angles) {
  const double sf = std::sin(angles.roll_phi);
  const double cf = std::cos(angles.roll_phi);
  const double st = std::sin(angles.pitch_theta);
  const double ct = std::cos(angles.pitch_theta);
  const double sp = std::sin(angles.yaw_psi);
  const double cp = std::cos(angles.yaw_psi);
  return Mat3{{
      {cp * ct, cp * st * sf - sp * cf, cp * st * cf + sp * sf},
      {sp * ct, sp * st * sf + cp * cf, sp * st * cf - cp * sf},
      {-st, ct * sf, ct * cf},
  }};
}

Mat3 transpose(const Mat3& m) {
  Mat3 t{};
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      t[c][r] = m[r][c];
    }
  }
  return t;
}

std::array<double, 3> multiply(const Mat3& m, const std::array<double, 3>& v) {
  std::array<double, 3> out{};
  for (std::size_t r = 0; r < 3; ++r) {
    out[r] = m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2];
  }
  return out;
}

WorldPoint relative_to_world(const WorldPoint& ego_pos, const EulerZXY& angles,
                             const CameraPoint& rel, OffsetSign sign) {
  const auto offset = multiply(rotation_zxy(angles), {rel.x, rel.y, rel.z});
  const double s = sign == OffsetSign::kSubtract ? -1.0 : 1.0;
  return WorldPoint{ego_pos.x + s * offset[0], ego_pos.y + s * offset[1],
                    ego_pos.z + s * offset[2]};
}

CameraPoint world_to_relative(const WorldPoint& ego_pos, const EulerZXY& angles,
                              const WorldPoint& object_pos, OffsetSign sign) {
  const double s = sign == OffsetSign::kSubtract ? -1.0 : 1.0;
  const std::array<double, 3> offset{s * (object_pos.x - ego_pos.x),
                                     s * (object_pos.y - ego_pos.y),
                                     s * (object_pos.z - ego_pos.z)};
  const auto rel = multiply(transpose(rotation_zxy(angles)), offset);
  return CameraPoint{rel[0], rel[1], rel[2]};
}

WorldPoint geo_to_local(double lat_deg, double lon_deg,
                        const GeoOrigin& origin) {
  const double dlat = deg_to_rad(lat_deg - origin.lat0);
  const double dlon = deg_to_rad(lon_deg - origin.lon0);
  return WorldPoint{
      origin.earth_radius_m * dlon * std::cos(deg_to_rad(origin.lat0)),
      origin.earth_radius_m * dlat, 0.0};
}

LatLon local_to_geo(const WorldPoint& p, const GeoOrigin& origin) {
  const double cos_lat0 = std::cos(deg_to_rad(origin.lat0));
  return LatLon{origin.lat0 + rad_to_deg(p.y / origin.earth_radius_m),
                origin.lon0 + rad_to_deg(p.x / (origin.earth_radius_m * cos_lat0))};
}

}  // namespace v2i::geo
