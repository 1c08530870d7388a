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

#ifndef SELD_TENSOR_IO_H_
#define SELD_TENSOR_IO_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "json.hpp"

namespace seld {

// On-disk tensor: `<path>` holds raw little-endian float32 values in row-major
// order and `<path>.json` holds {"dims": [...], ...extra header fields}.
struct StoredTensor {
  std::vector<std::size_t> dims;
  std::vector<float> values;
  nlohmann::json header;
};

std::filesystem::path sidecar_path(const std::filesystem::path& path);

void write_tensor(const std::filesystem::path& path, std::span<const std::size_t> dims,
                  std::span<const float> values, nlohmann::json header = nlohmann::json::object());
StoredTensor read_tensor(const std::filesystem::path& path);

}  // namespace seld

#endif  // SELD_TENSOR_IO_H_
