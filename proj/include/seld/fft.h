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

#ifndef SELD_FFT_H_
#define SELD_FFT_H_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace seld {

// Real-input FFT of a fixed length backed by FFTW. Plans are created once per
// length under a lock and shared; transforms may run concurrently.
class RealFft {
 public:
  explicit RealFft(std::size_t n);

  std::size_t size() const { return n_; }
  std::size_t num_bins() const { return n_ / 2 + 1; }

  // `in` has size() samples, `out` has num_bins() values.
  void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
  // Normalized inverse: inverse(forward(x)) == x.
  void inverse(std::span<const std::complex<double>> in, std::span<double> out) const;

 private:
  std::size_t n_;
  void* forward_plan_;
  void* inverse_plan_;
};

// Full linear convolution, length a.size() + b.size() - 1 (empty if either is).
std::vector<double> convolve(std::span<const double> a, std::span<const double> b);

}  // namespace seld

#endif  // SELD_FFT_H_
