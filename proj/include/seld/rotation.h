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

// The 16 FOA channel transforms built from X/Y swaps and X/Y/Z sign flips.
// They act on azimuth as the dihedral group of order 8 (quarter-turn
// rotations and reflections) and on elevation as an optional sign flip.
// The same element acts on audio (channel remap) and on labels (angle map),
// and the two actions commute with FOA encoding.

#ifndef SELD_ROTATION_H_
#define SELD_ROTATION_H_

#include <array>
#include <string>
#include <vector>

#include "seld/audio.h"
#include "seld/geometry.h"
#include "seld/labels.h"

namespace seld {

inline constexpr int kNumPatterns = 16;

// Symbolic azimuth transform, phi being the input azimuth.
enum class AzimuthMap {
  kPhi,              // phi
  kNegPhi,           // -phi
  kNinetyMinusPhi,   // 90 - phi
  kPhiPlusNinety,    // phi + 90
  kPhiMinusNinety,   // phi - 90
  kNegPhiMinusNinety,// -phi - 90
  k180MinusPhi,      // 180 - phi
  kPhiPlus180,       // phi + 180
};

std::string to_string(AzimuthMap map);

struct RotationPattern {
  int id = 0;
  // When set, output X is fed from input Y and output Y from input X.
  bool swap_xy = false;
  int sign_x = 1;
  int sign_y = 1;
  int sign_z = 1;
  AzimuthMap azimuth_map = AzimuthMap::kPhi;
  int elevation_sign = 1;

  // Signed permutation acting on (x, y, z) column vectors.
  std::array<std::array<int, 3>, 3> matrix() const;
  bool is_identity() const { return id == 0; }

  bool operator==(const RotationPattern&) const = default;
};

// Ids follow azimuth maps in enum order, elevation +1 before -1:
// id = 2 * azimuth_map_index + (elevation_sign < 0).
const std::vector<RotationPattern>& all_patterns();
// Throws on ids outside [0, 16).
const RotationPattern& pattern(int id);

RotationPattern inverse(const RotationPattern& p);
// The transform "apply q, then p".
RotationPattern compose(const RotationPattern& p, const RotationPattern& q);

AudioClip apply_to_audio(const AudioClip& clip, const RotationPattern& p);
Direction apply_to_direction(const Direction& d, const RotationPattern& p);
// Exact signed-permutation action on a Cartesian vector.
Vec3 apply_to_vector(const Vec3& v, const RotationPattern& p);
ClipAnnotation apply_to_annotation(const ClipAnnotation& annotation, const RotationPattern& p);

}  // namespace seld

#endif  // SELD_ROTATION_H_
