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

#ifndef SELD_TESTS_TEST_UTIL_H_
#define SELD_TESTS_TEST_UTIL_H_

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "seld/audio.h"
#include "seld/emulator.h"
#include "seld/geometry.h"

namespace testing_util {

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("seld_test_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// Plane wave from d carrying `mono`, encoded with SN3D gains.
inline seld::AudioClip plane_wave(const std::vector<double>& mono, const seld::Direction& d,
                                  int rate = seld::kDefaultSampleRate) {
  const auto g = seld::foa_encode_gains(d);
  seld::AudioClip clip(rate, mono.size());
  for (int c = 0; c < seld::kFoaChannels; ++c) {
    for (std::size_t i = 0; i < mono.size(); ++i) clip.channels[c][i] = g[c] * mono[i];
  }
  return clip;
}

inline std::vector<double> white_noise(std::size_t n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> g;
  std::vector<double> out(n);
  for (auto& v : out) v = g(gen);
  return out;
}

inline std::vector<double> sine(double hz, std::size_t n, int rate = seld::kDefaultSampleRate,
                                double amp = 1.0) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = amp * std::sin(2.0 * M_PI * hz * i / rate);
  return out;
}

}  // namespace testing_util

#endif  // SELD_TESTS_TEST_UTIL_H_
