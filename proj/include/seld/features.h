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

// Frame-wise SELD input features: four log-mel spectrograms (W, X, Y, Z)
// stacked with three mel-band FOA intensity-vector channels.

#ifndef SELD_FEATURES_H_
#define SELD_FEATURES_H_

#include <complex>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "seld/audio.h"
#include "seld/geometry.h"

namespace seld {

// 600-sample hop at 24 kHz is 25 ms, so four STFT frames make one 100 ms
// label frame.
inline constexpr int kStftFramesPerLabelFrame = 4;
inline constexpr int kFeatureChannels = 7;

struct FeatureConfig {
  int sample_rate = 24000;
  int nfft = 2048;
  int hop = 600;
  int window = 1200;
  int n_mels = 64;
  double floor_eps = 1e-10;

  void validate() const;
  // Center-padded frame count, 1 + floor(num_samples / hop).
  std::size_t num_frames(std::size_t num_samples) const;

  nlohmann::json to_json() const;
  static FeatureConfig from_json(const nlohmann::json& j);
};

struct Spectrogram {
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::vector<std::complex<double>> values;  // [frame][bin]

  std::complex<double>& at(std::size_t t, std::size_t k) { return values[t * bins + k]; }
  const std::complex<double>& at(std::size_t t, std::size_t k) const { return values[t * bins + k]; }
};

// Dense [channels x frames x mels] float tensor.
struct FeatureTensor {
  std::size_t channels = 0;
  std::size_t frames = 0;
  std::size_t mels = 0;
  std::vector<float> values;

  FeatureTensor() = default;
  FeatureTensor(std::size_t c, std::size_t t, std::size_t m)
      : channels(c), frames(t), mels(m), values(c * t * m, 0.0f) {}

  float& at(std::size_t c, std::size_t t, std::size_t m) { return values[(c * frames + t) * mels + m]; }
  float at(std::size_t c, std::size_t t, std::size_t m) const {
    return values[(c * frames + t) * mels + m];
  }

  bool operator==(const FeatureTensor&) const = default;
};

// Periodic Hann window of the given length.
std::vector<double> hann_window(int length);

// Hann-windowed STFT with reflect center padding of nfft/2 on both sides; the
// window is centered inside the nfft-point frame and zero-padded around it.
Spectrogram stft(std::span<const double> samples, const FeatureConfig& config);

// HTK mel scale.
double hz_to_mel(double hz);
double mel_to_hz(double mel);

struct MelFilterbank {
  int n_mels = 0;
  int n_bins = 0;
  std::vector<double> weights;    // [mel][bin]
  std::vector<double> center_hz;  // triangle apex per mel row

  double at(int m, int k) const { return weights[static_cast<std::size_t>(m) * n_bins + k]; }
};

// Triangular filters with apexes equally spaced on the mel scale between 0 Hz
// and sample_rate / 2, unit peak. Throws when any row gets no nonzero weight.
MelFilterbank mel_filterbank(const FeatureConfig& config);

// [4 x frames x mels]: log(mel power + floor_eps) per FOA channel.
FeatureTensor log_mel(const AudioClip& clip, const FeatureConfig& config);

// [3 x frames x mels]: Re(conj(W) * (X, Y, Z)) aggregated by the filterbank,
// normalized to unit length per (frame, mel); zero where the norm is below
// floor_eps.
FeatureTensor intensity_vector(const Spectrogram& w, const Spectrogram& x, const Spectrogram& y,
                               const Spectrogram& z, const FeatureConfig& config);

// [7 x frames x mels]: log_mel channels followed by intensity channels.
FeatureTensor extract_features(const AudioClip& clip, const FeatureConfig& config);

// Energy-weighted broadband intensity direction of a clip, optionally limited
// to STFT frames [frame_begin, frame_end).
Direction intensity_doa(const AudioClip& clip, const FeatureConfig& config,
                        std::size_t frame_begin = 0,
                        std::size_t frame_end = static_cast<std::size_t>(-1));

// Mean of the nonzero intensity channels of a feature tensor over STFT frames
// [frame_begin, frame_end); nullopt when no bin carries intensity.
std::optional<Direction> feature_doa(const FeatureTensor& features, std::size_t frame_begin = 0,
                                     std::size_t frame_end = static_cast<std::size_t>(-1));

void write_features(const std::filesystem::path& path, const FeatureTensor& features,
                    const FeatureConfig& config);
FeatureTensor read_features(const std::filesystem::path& path);

}  // namespace seld

#endif  // SELD_FEATURES_H_
