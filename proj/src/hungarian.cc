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

#include "seld/hungarian.h"

#include <cstddef>
#include <limits>

#include "seld/error.h"

namespace seld {

namespace {

// Requires rows <= cols. 1-based internally; index 0 is the virtual column.
std::vector<int> solve_wide(const std::vector<std::vector<double>>& a, std::size_t n, std::size_t m) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> match(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> rows(n, -1);
  for (std::size_t j = 1; j <= m; ++j) {
    if (match[j] != 0) rows[match[j] - 1] = static_cast<int>(j - 1);
  }
  return rows;
}

}  // namespace

std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  if (n == 0) return {};
  const std::size_t m = cost.front().size();
  for (const auto& row : cost) {
    if (row.size() != m) throw Error("cost matrix rows differ in length");
  }
  if (m == 0) return std::vector<int>(n, -1);
  if (n <= m) return solve_wide(cost, n, m);

  std::vector<std::vector<double>> t(m, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) t[j][i] = cost[i][j];
  }
  const auto cols = solve_wide(t, m, n);
  std::vector<int> rows(n, -1);
  for (std::size_t j = 0; j < m; ++j) {
    if (cols[j] >= 0) rows[static_cast<std::size_t>(cols[j])] = static_cast<int>(j);
  }
  return rows;
}

double assignment_cost(const std::vector<std::vector<double>>& cost, const std::vector<int>& rows) {
  double total = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= 0) total += cost[i][static_cast<std::size_t>(rows[i])];
  }
  return total;
}

}  // namespace seld
