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

#include "seld/rotation.h"

#include "seld/error.h"

namespace seld {

namespace {

struct XyRealization {
  AzimuthMap map;
  bool swap_xy;
  int sign_x;
  int sign_y;
};

// With X = cos(phi) and Y = sin(phi) (times cos(el)), each azimuth map is one
// signed arrangement of the input X/Y pair, e.g. 90 - phi gives
// (cos(90 - phi), sin(90 - phi)) = (Y, X).
constexpr std::array<XyRealization, 8> kXyTable{{
    {AzimuthMap::kPhi, false, 1, 1},
    {AzimuthMap::kNegPhi, false, 1, -1},
    {AzimuthMap::kNinetyMinusPhi, true, 1, 1},
    {AzimuthMap::kPhiPlusNinety, true, -1, 1},
    {AzimuthMap::kPhiMinusNinety, true, 1, -1},
    {AzimuthMap::kNegPhiMinusNinety, true, -1, -1},
    {AzimuthMap::k180MinusPhi, false, -1, 1},
    {AzimuthMap::kPhiPlus180, false, -1, -1},
}};

std::vector<RotationPattern> build_patterns() {
  std::vector<RotationPattern> out;
  for (const auto& xy : kXyTable) {
    for (const int el_sign : {1, -1}) {
      RotationPattern p;
      p.id = static_cast<int>(out.size());
      p.swap_xy = xy.swap_xy;
      p.sign_x = xy.sign_x;
      p.sign_y = xy.sign_y;
      p.sign_z = el_sign;
      p.azimuth_map = xy.map;
      p.elevation_sign = el_sign;
      out.push_back(p);
    }
  }
  return out;
}

using Matrix = std::array<std::array<int, 3>, 3>;

Matrix multiply(const Matrix& a, const Matrix& b) {
  Matrix c{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
    }
  }
  return c;
}

const RotationPattern& find_by_matrix(const Matrix& m) {
  for (const auto& p : all_patterns()) {
    if (p.matrix() == m) return p;
  }
  throw Error("channel transform is not one of the 16 rotation patterns");
}

}  // namespace

std::string to_string(AzimuthMap map) {
  switch (map) {
    case AzimuthMap::kPhi: return "phi";
    case AzimuthMap::kNegPhi: return "-phi";
    case AzimuthMap::kNinetyMinusPhi: return "90-phi";
    case AzimuthMap::kPhiPlusNinety: return "phi+90";
    case AzimuthMap::kPhiMinusNinety: return "phi-90";
    case AzimuthMap::kNegPhiMinusNinety: return "-phi-90";
    case AzimuthMap::k180MinusPhi: return "180-phi";
    case AzimuthMap::kPhiPlus180: return "phi+180";
  }
  return "?";
}

std::array<std::array<int, 3>, 3> RotationPattern::matrix() const {
  Matrix m{};
  if (swap_xy) {
    m[0][1] = sign_x;
    m[1][0] = sign_y;
  } else {
    m[0][0] = sign_x;
    m[1][1] = sign_y;
  }
  m[2][2] = sign_z;
  return m;
}

const std::vector<RotationPattern>& all_patterns() {
  static const std::vector<RotationPattern> patterns = build_patterns();
  return patterns;
}

const RotationPattern& pattern(int id) {
  if (id < 0 || id >= kNumPatterns) {
    throw Error("rotation pattern id must be in [0, 15], got " + std::to_string(id));
  }
  return all_patterns()[static_cast<std::size_t>(id)];
}

RotationPattern inverse(const RotationPattern& p) {
  Matrix t{};
  const Matrix m = p.matrix();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) t[i][j] = m[j][i];
  }
  return find_by_matrix(t);
}

RotationPattern compose(const RotationPattern& p, const RotationPattern& q) {
  return find_by_matrix(multiply(p.matrix(), q.matrix()));
}

AudioClip apply_to_audio(const AudioClip& clip, const RotationPattern& p) {
  clip.validate();
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.channels[kW] = clip.channels[kW];
  const auto& x_src = p.swap_xy ? clip.channels[kY] : clip.channels[kX];
  const auto& y_src = p.swap_xy ? clip.channels[kX] : clip.channels[kY];
  const auto copy_signed = [](const std::vector<double>& src, int sign) {
    std::vector<double> dst(src);
    if (sign < 0) {
      for (double& v : dst) v = -v;
    }
    return dst;
  };
  out.channels[kX] = copy_signed(x_src, p.sign_x);
  out.channels[kY] = copy_signed(y_src, p.sign_y);
  out.channels[kZ] = copy_signed(clip.channels[kZ], p.sign_z);
  return out;
}

Direction apply_to_direction(const Direction& d, const RotationPattern& p) {
  const double phi = d.azimuth();
  double az = phi;
  switch (p.azimuth_map) {
    case AzimuthMap::kPhi: az = phi; break;
    case AzimuthMap::kNegPhi: az = -phi; break;
    case AzimuthMap::kNinetyMinusPhi: az = 90.0 - phi; break;
    case AzimuthMap::kPhiPlusNinety: az = phi + 90.0; break;
    case AzimuthMap::kPhiMinusNinety: az = phi - 90.0; break;
    case AzimuthMap::kNegPhiMinusNinety: az = -phi - 90.0; break;
    case AzimuthMap::k180MinusPhi: az = 180.0 - phi; break;
    case AzimuthMap::kPhiPlus180: az = phi + 180.0; break;
  }
  return Direction(az, d.elevation() * p.elevation_sign);
}

Vec3 apply_to_vector(const Vec3& v, const RotationPattern& p) {
  const double in_x = p.swap_xy ? v.y : v.x;
  const double in_y = p.swap_xy ? v.x : v.y;
  return {p.sign_x * in_x, p.sign_y * in_y, p.sign_z * v.z};
}

ClipAnnotation apply_to_annotation(const ClipAnnotation& annotation, const RotationPattern& p) {
  ClipAnnotation out(annotation.n_classes());
  for (auto e : annotation.events()) {
    e.direction = apply_to_direction(e.direction, p);
    out.add(e);
  }
  return out;
}

}  // namespace seld
