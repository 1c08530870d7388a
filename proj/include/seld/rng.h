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

#ifndef SELD_RNG_H_
#define SELD_RNG_H_

#include <random>

namespace seld {

// Every stochastic stage takes an explicit generator; callers own seeding.
using Rng = std::mt19937_64;

}  // namespace seld

#endif  // SELD_RNG_H_
