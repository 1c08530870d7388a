// Copyright 2026 The seldkit Authors.
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

#include "seld/geometry.h"

#include <string>

#include "seld/error.h"

namespace seld {

UnitVec3::UnitVec3(const Vec3& v) {
  const double n = norm(v);
  if (!(n > 0.0) || !std::isfinite(n)) throw Error("undefined direction");
  v_ = v / n;
}

double wrap_azimuth(double deg) {
  double a = std::fmod(deg, 360.0);
  if (a <= -180.0) a += 360.0;
  if (a > 180.0) a -= 360.0;
  return a;
}

Direction::Direction(double azimuth_deg, double elevation_deg) {
  if (!std::isfinite(azimuth_deg) || !std::isfinite(elevation_deg)) {
    throw Error("direction angles must be finite");
  }
  if (elevation_deg < -90.0 || elevation_deg > 90.0) {
    throw Error("elevation out of range [-90, 90]: " + std::to_string(elevation_deg));
  }
  azimuth_ = wrap_azimuth(azimuth_deg);
  elevation_ = elevation_deg;
}

UnitVec3 dir_to_unit(const Direction& d) {
  const double az = d.azimuth() * kDegToRad;
  const double el = d.elevation() * kDegToRad;
  return UnitVec3(Vec3{std::cos(az) * std::cos(el), std::sin(az) * std::cos(el), std::sin(el)});
}

Direction unit_to_dir(const Vec3& v) {
  const UnitVec3 u(v);
  const double horizontal = std::hypot(u.x(), u.y());
  const double el = std::atan2(u.z(), horizontal) * kRadToDeg;
  const double az = horizontal > 0.0 ? std::atan2(u.y(), u.x()) * kRadToDeg : 0.0;
  return Direction(az, el);
}

double angular_distance(const Vec3& a, const Vec3& b) {
  // atan2 form stays accurate near 0 and 180 degrees where acos loses digits.
  return std::atan2(norm(cross(a, b)), dot(a, b)) * kRadToDeg;
}

double angular_distance(const Direction& a, const Direction& b) {
  return angular_distance(dir_to_unit(a).vec(), dir_to_unit(b).vec());
}

}  // namespace seld
