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

#ifndef SELD_HUNGARIAN_H_
#define SELD_HUNGARIAN_H_

#include <vector>

namespace seld {

// Minimum-cost assignment for a rectangular cost matrix (rows x cols) using
// the O(n^2 m) potentials formulation of the Hungarian method. Returns, per
// row, the assigned column or -1; exactly min(rows, cols) rows are assigned.
std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost);

double assignment_cost(const std::vector<std::vector<double>>& cost, const std::vector<int>& rows);

}  // namespace seld

#endif  // SELD_HUNGARIAN_H_
