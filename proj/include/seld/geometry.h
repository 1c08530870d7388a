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

#ifndef SELD_GEOMETRY_H_
#define SELD_GEOMETRY_H_

#include <cmath>
#include <numbers>

namespace seld {

inline constexpr double kDegToRad = std::numbers::pi / 180.0;
inline constexpr double kRadToDeg = 180.0 / std::numbers::pi;

// Plain Cartesian 3-vector. Axis convention: x front, y left, z up.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr bool operator==(const Vec3&) const = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

// Unit-norm vector. Construction normalizes; the zero vector is rejected.
class UnitVec3 {
 public:
  // Throws seld::Error("undefined direction") when v has zero norm.
  explicit UnitVec3(const Vec3& v);

  double x() const { return v_.x; }
  double y() const { return v_.y; }
  double z() const { return v_.z; }
  const Vec3& vec() const { return v_; }

 private:
  Vec3 v_;
};

// Direction of arrival in degrees. Azimuth is wrapped into (-180, 180];
// elevation outside [-90, 90] is an error.
class Direction {
 public:
  Direction() = default;
  Direction(double azimuth_deg, double elevation_deg);

  double azimuth() const { return azimuth_; }
  double elevation() const { return elevation_; }

  bool operator==(const Direction&) const = default;

 private:
  double azimuth_ = 0.0;
  double elevation_ = 0.0;
};

// Wraps any finite angle into (-180, 180].
double wrap_azimuth(double deg);

UnitVec3 dir_to_unit(const Direction& d);

// Normalizes v first. Azimuth is 0 at the poles.
Direction unit_to_dir(const Vec3& v);
inline Direction unit_to_dir(const UnitVec3& v) { return unit_to_dir(v.vec()); }

// Great-circle angle in degrees, in [0, 180].
double angular_distance(const Direction& a, const Direction& b);
double angular_distance(const Vec3& a, const Vec3& b);

}  // namespace seld

#endif  // SELD_GEOMETRY_H_
