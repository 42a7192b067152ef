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

#ifndef V2I_GEOMETRY_GEOMETRY_HPP_
#define V2I_GEOMETRY_GEOMETRY_HPP_

#include <array>

namespace v2i::geo {

inline constexpr double kMeanEarthRadiusM = 6371000.0;

double deg_to_rad(double deg);
double rad_to_deg(double rad);

// Stereo camera parameters. Defaults describe a 672x376 stream from a
// 119.89 mm baseline rig mounted with a 15 degree downward pitch; the focal
// length is a calibration value, not a property of the sensor model.
struct CameraIntrinsics {
  double focal_px = 350.0;
  double baseline_m = 0.11989;
  double principal_u = 336.0;
  double principal_v = 188.0;
  double tilt_deg = 15.0;

  // Throws Errc::kInvalidArgument when an invariant is violated.
  void validate() const;

  bool operator==(const CameraIntrinsics&) const = default;
};

struct EulerZXY {
  double roll_phi = 0.0;
  double pitch_theta = 0.0;
  double yaw_psi = 0.0;
};

// Camera frame: x right, y down, z along the optical axis.
struct CameraPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const CameraPoint&) const = default;
};

// Twin frame: local east-north-up tangent plane around a GeoOrigin.
struct WorldPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const WorldPoint&) const = default;
};

struct GeoOrigin {
  double lat0 = 0.0;
  double lon0 = 0.0;
  double earth_radius_m = kMeanEarthRadiusM;

  void validate() const;
};

using Mat3 = std::array<std::array<double, 3>, 3>;

// Sign applied to the rotated offset when placing an object in the world:
// kSubtract is the literal `ego - R * rel` form, kAdd flips it.
enum class OffsetSign { kSubtract, kAdd };

// Z = f * B / d. Throws Errc::kDegenerateDisparity for d <= 0 or non-finite d.
double disparity_to_depth(double disparity_px, const CameraIntrinsics& intr);

// Projects optical-axis depth onto the horizontal plane: depth * cos(tilt).
double tilt_compensate(double depth_m, const CameraIntrinsics& intr);

// Pinhole back-projection of pixel (u, v) at the given depth.
CameraPoint pixel_to_camera(double u, double v, double depth_m,
                            const CameraIntrinsics& intr);

// Rotation matrix composed as Rz(psi) * Ry(theta) * Rx(phi).
Mat3 rotation_zxy(const EulerZXY& angles);

Mat3 transpose(const Mat3& m);
std::array<double, 3> multiply(const Mat3& m, const std::array<double, 3>& v);

WorldPoint relative_to_world(const WorldPoint& ego_pos, const EulerZXY& angles,
                             const CameraPoint& rel,
                             OffsetSign sign = OffsetSign::kSubtract);

// Inverse of relative_to_world for the same angles and sign.
CameraPoint world_to_relative(const WorldPoint& ego_pos, const EulerZXY& angles,
                              const WorldPoint& object_pos,
                              OffsetSign sign = OffsetSign::kSubtract);

// Equirectangular local tangent plane; z is always 0.
WorldPoint geo_to_local(double lat_deg, double lon_deg, const GeoOrigin& origin);

struct LatLon {
  double lat = 0.0;
  double lon = 0.0;
};

LatLon local_to_geo(const WorldPoint& p, const GeoOrigin& origin);

}  // namespace v2i::geo

#endif  // V2I_GEOMETRY_GEOMETRY_HPP_
