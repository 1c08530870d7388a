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

#ifndef SELD_AUGMENT_H_
#define SELD_AUGMENT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "seld/audio.h"
#include "seld/features.h"
#include "seld/rng.h"

namespace seld {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct SpecAugmentConfig {
  int n_time_masks = 2;
  int max_time_frames = 20;
  int n_freq_masks = 2;
  int max_mel_bins = 8;
};

// Sampling ranges for the waveform augmentations plus spectrogram masking.
struct AugmentConfig {
  bool enable_gain = true;
  bool enable_pitch = true;
  bool enable_bandpass = true;
  Range gain_db{-6.0, 6.0};
  Range pitch_semitones{-2.0, 2.0};
  Range bandpass_lo_hz{50.0, 200.0};
  Range bandpass_hi_hz{6000.0, 10000.0};
  SpecAugmentConfig spec;
  std::uint64_t seed = 0;

  void validate() const;
  nlohmann::json to_json() const;
  static AugmentConfig from_json(const nlohmann::json& j);
};

// Scales all channels by 10^(gain_db / 20).
AudioClip apply_gain(const AudioClip& clip, double gain_db);

// Resamples every channel by 2^(semitones / 12) with a windowed-sinc
// interpolator, then truncates or zero-pads back to the input length.
AudioClip pitch_shift(const AudioClip& clip, double semitones);

// Normalized second-order section (a0 == 1), transposed direct form II.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0, a1 = 0.0, a2 = 0.0;

  static Biquad butterworth_highpass(double cutoff_hz, double sample_rate);
  static Biquad butterworth_lowpass(double cutoff_hz, double sample_rate);

  std::vector<double> process(std::span<const double> x) const;
  double magnitude(double freq_hz, double sample_rate) const;
};

// Butterworth high-pass at f_lo cascaded with low-pass at f_hi, both second
// order. Requires 0 < f_lo < f_hi < sample_rate / 2.
AudioClip band_pass(const AudioClip& clip, double f_lo, double f_hi);

// Draws gain, pitch and band edges from the configured ranges (in that order,
// skipping disabled stages) and applies them.
AudioClip augment_waveform(const AudioClip& clip, const AugmentConfig& config, Rng& rng);

struct MaskSpan {
  std::size_t begin = 0;
  std::size_t width = 0;
};

struct MaskPlan {
  std::vector<MaskSpan> time;
  std::vector<MaskSpan> freq;
};

MaskPlan draw_masks(const SpecAugmentConfig& config, std::size_t frames, std::size_t mels, Rng& rng);
// Fills masked cells with the per-channel mean of the input, at the
// same positions in every channel.
FeatureTensor apply_masks(const FeatureTensor& features, const MaskPlan& plan);
FeatureTensor spec_augment(const FeatureTensor& features, const SpecAugmentConfig& config, Rng& rng);

}  // namespace seld

#endif  // SELD_AUGMENT_H_
