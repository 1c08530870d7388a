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

// Brute-force reference implementations used as test oracles. They share no
// code with the library beyond the Vec3 type.

#ifndef SELD_TESTS_ORACLES_H_
#define SELD_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "seld/geometry.h"

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

inline double deg(double rad) { return rad * 180.0 / kPi; }
inline double rad(double d) { return d * kPi / 180.0; }

inline seld::Vec3 unit(double az_deg, double el_deg) {
  return {std::cos(rad(az_deg)) * std::cos(rad(el_deg)), std::sin(rad(az_deg)) * std::cos(rad(el_deg)),
          std::sin(rad(el_deg))};
}

// Great-circle angle via the clamped dot product of normalized vectors.
inline double angle_deg(const seld::Vec3& a, const seld::Vec3& b) {
  const double na = std::sqrt(a.x * a.x + a.y * a.y + a.z * a.z);
  const double nb = std::sqrt(b.x * b.x + b.y * b.y + b.z * b.z);
  const double c = (a.x * b.x + a.y * b.y + a.z * b.z) / (na * nb);
  return deg(std::acos(std::clamp(c, -1.0, 1.0)));
}

// Uniform point on the unit sphere.
template <class Gen>
seld::Vec3 random_unit(Gen& gen) {
  std::normal_distribution<double> g;
  for (;;) {
    seld::Vec3 v{g(gen), g(gen), g(gen)};
    const double n = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
    if (n > 1e-9) return {v.x / n, v.y / n, v.z / n};
  }
}

// DBSCAN by components: core points are linked when within eps, components
// are numbered by their smallest core index, and each border point joins the
// lowest-numbered component with a core inside its eps ball.
inline std::vector<int> dbscan(const std::vector<seld::Vec3>& pts, double eps_deg, int min_pts) {
  const std::size_t n = pts.size();
  std::vector<std::vector<bool>> near(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) near[i][j] = angle_deg(pts[i], pts[j]) <= eps_deg;
  }
  std::vector<bool> core(n);
  for (std::size_t i = 0; i < n; ++i) {
    core[i] = std::count(near[i].begin(), near[i].end(), true) >= min_pts;
  }
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (core[i] && core[j] && near[i][j]) {
        const auto a = find(i), b = find(j);
        parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<int> label(n, -1);
  std::vector<int> id_of_root(n, -1);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!core[i]) continue;
    const auto r = find(i);
    if (id_of_root[r] < 0) id_of_root[r] = next++;
    label[i] = id_of_root[r];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) continue;
    int best = -1;
    for (std::size_t j = 0; j < n; ++j) {
      if (core[j] && near[i][j] && (best < 0 || label[j] < best)) best = label[j];
    }
    label[i] = best;
  }
  return label;
}

// Minimum total cost over all injective row/column pairings of size
// min(rows, cols).
inline double min_assignment(const std::vector<std::vector<double>>& cost) {
  const std::size_t r = cost.size();
  if (r == 0) return 0.0;
  const std::size_t c = cost[0].size();
  if (c == 0) return 0.0;
  const bool rows_small = r <= c;
  const std::size_t k = std::min(r, c), big = std::max(r, c);
  std::vector<std::size_t> perm(big);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += rows_small ? cost[i][perm[i]] : cost[perm[i]][i];
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

// HTK mel scale, inverted numerically by bisection.
inline double mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
inline double mel_inverse(double m) {
  double lo = 0.0, hi = 1e6;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mel(mid) < m ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Apex frequency of mel triangle i out of n spanning [0, nyquist].
inline double mel_center(int i, int n, double nyquist) {
  return mel_inverse(mel(nyquist) * (i + 1) / (n + 1));
}

inline double hann(int n, int length) { return 0.5 - 0.5 * std::cos(2.0 * kPi * n / length); }

}  // namespace oracle

#endif  // SELD_TESTS_ORACLES_H_
