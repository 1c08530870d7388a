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

#include "seld/fft.h"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "seld/error.h"

namespace seld {

namespace {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
using RealBuffer = std::unique_ptr<double, FftwFree>;
using ComplexBuffer = std::unique_ptr<fftw_complex, FftwFree>;

RealBuffer alloc_real(std::size_t n) { return RealBuffer(fftw_alloc_real(n)); }
ComplexBuffer alloc_complex(std::size_t n) { return ComplexBuffer(fftw_alloc_complex(n)); }

// Plans live for the whole process; FFTW planning is not thread-safe.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

std::pair<fftw_plan, fftw_plan> plans_for(std::size_t n) {
  static std::map<std::size_t, std::pair<fftw_plan, fftw_plan>> cache;
  std::lock_guard lock(plan_mutex());
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  auto real = alloc_real(n);
  auto cplx = alloc_complex(n / 2 + 1);
  const int len = static_cast<int>(n);
  fftw_plan fwd = fftw_plan_dft_r2c_1d(len, real.get(), cplx.get(), FFTW_ESTIMATE);
  fftw_plan inv = fftw_plan_dft_c2r_1d(len, cplx.get(), real.get(), FFTW_ESTIMATE);
  if (fwd == nullptr || inv == nullptr) throw Error("FFTW planning failed");
  return cache.emplace(n, std::pair(fwd, inv)).first->second;
}

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  if (n == 0) throw Error("FFT length must be positive");
  const auto [fwd, inv] = plans_for(n);
  forward_plan_ = fwd;
  inverse_plan_ = inv;
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
  if (in.size() != n_ || out.size() != num_bins()) throw Error("FFT buffer size mismatch");
  auto real = alloc_real(n_);
  auto cplx = alloc_complex(num_bins());
  std::copy(in.begin(), in.end(), real.get());
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), real.get(), cplx.get());
  for (std::size_t k = 0; k < num_bins(); ++k) out[k] = {cplx.get()[k][0], cplx.get()[k][1]};
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) const {
  if (in.size() != num_bins() || out.size() != n_) throw Error("FFT buffer size mismatch");
  auto real = alloc_real(n_);
  auto cplx = alloc_complex(num_bins());
  for (std::size_t k = 0; k < num_bins(); ++k) {
    cplx.get()[k][0] = in[k].real();
    cplx.get()[k][1] = in[k].imag();
  }
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_), cplx.get(), real.get());
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = real.get()[i] * scale;
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;
  if (std::min(a.size(), b.size()) <= 32) {
    std::vector<double> out(out_len, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
  }
  const std::size_t n = std::bit_ceil(out_len);
  const RealFft fft(n);
  std::vector<double> pa(n, 0.0), pb(n, 0.0);
  std::copy(a.begin(), a.end(), pa.begin());
  std::copy(b.begin(), b.end(), pb.begin());
  std::vector<std::complex<double>> fa(fft.num_bins()), fb(fft.num_bins());
  fft.forward(pa, fa);
  fft.forward(pb, fb);
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
  fft.inverse(fa, pa);
  pa.resize(out_len);
  return pa;
}

}  // namespace seld
