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

#include "seld/tensor_io.h"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <numeric>

#include "seld/error.h"

namespace seld {

static_assert(std::endian::native == std::endian::little,
              "tensor files are little-endian; add byte swapping for big-endian hosts");

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".json");
}

void write_tensor(const std::filesystem::path& path, std::span<const std::size_t> dims,
                  std::span<const float> values, nlohmann::json header) {
  const std::size_t count =
      std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
  if (count != values.size()) throw Error("tensor dims do not match value count");
  header["dims"] = std::vector<std::size_t>(dims.begin(), dims.end());
  header["dtype"] = "float32-le";

  std::ofstream data(path, std::ios::binary);
  if (!data) throw Error("cannot write " + path.string());
  data.write(reinterpret_cast<const char*>(values.data()),
             static_cast<std::streamsize>(values.size() * sizeof(float)));
  std::ofstream side(sidecar_path(path), std::ios::binary);
  if (!side) throw Error("cannot write " + sidecar_path(path).string());
  side << header.dump(2) << '\n';
}

StoredTensor read_tensor(const std::filesystem::path& path) {
  std::ifstream side(sidecar_path(path));
  if (!side) throw Error("cannot open tensor header " + sidecar_path(path).string());
  StoredTensor tensor;
  try {
    tensor.header = nlohmann::json::parse(side);
    tensor.dims = tensor.header.at("dims").get<std::vector<std::size_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(sidecar_path(path).string() + ": " + e.what());
  }
  const std::size_t count = std::accumulate(tensor.dims.begin(), tensor.dims.end(), std::size_t{1},
                                            std::multiplies<>());
  std::ifstream data(path, std::ios::binary | std::ios::ate);
  if (!data) throw Error("cannot open " + path.string());
  const auto size = static_cast<std::size_t>(data.tellg());
  if (size != count * sizeof(float)) {
    throw Error(path.string() + ": expected " + std::to_string(count * sizeof(float)) +
                " bytes, found " + std::to_string(size));
  }
  data.seekg(0);
  tensor.values.resize(count);
  data.read(reinterpret_cast<char*>(tensor.values.data()), static_cast<std::streamsize>(size));
  return tensor;
}

}  // namespace seld
