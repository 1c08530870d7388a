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

#include "seld/augment.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "seld/error.h"

namespace seld {

namespace {

constexpr double kPi = std::numbers::pi;
// Half-width of the interpolation kernel in zero crossings.
constexpr int kSincZeroCrossings = 16;

void check_range(const Range& r, const char* name) {
  if (!(r.lo <= r.hi)) throw Error(std::string(name) + " range is not ordered");
}

Range range_from(const nlohmann::json& j, const char* key, Range fallback) {
  if (!j.contains(key)) return fallback;
  const auto v = j.at(key).get<std::vector<double>>();
  if (v.size() != 2) throw Error(std::string(key) + " must be [lo, hi]");
  return {v[0], v[1]};
}

double uniform(Rng& rng, const Range& r) {
  return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
}

std::vector<double> resample(std::span<const double> x, double ratio) {
  const std::size_t n = x.size();
  std::vector<double> out(n, 0.0);
  const double cutoff = std::min(1.0, 1.0 / ratio);
  const double half_width = kSincZeroCrossings / cutoff;
  for (std::size_t i = 0; i < n; ++i) {
    const double pos = static_cast<double>(i) * ratio;
    if (pos > static_cast<double>(n - 1) + half_width) break;
    const long long first = static_cast<long long>(std::ceil(pos - half_width));
    const long long last = static_cast<long long>(std::floor(pos + half_width));
    double acc = 0.0;
    for (long long k = std::max(0LL, first); k <= std::min<long long>(last, n - 1); ++k) {
      const double t = pos - static_cast<double>(k);
      const double arg = cutoff * t;
      const double sinc = arg == 0.0 ? 1.0 : std::sin(kPi * arg) / (kPi * arg);
      const double window = 0.5 + 0.5 * std::cos(kPi * t / half_width);
      acc += x[static_cast<std::size_t>(k)] * cutoff * sinc * window;
    }
    out[i] = acc;
  }
  return out;
}

}  // namespace

void AugmentConfig::validate() const {
  check_range(gain_db, "gain_db");
  check_range(pitch_semitones, "pitch_semitones");
  check_range(bandpass_lo_hz, "bandpass_lo_hz");
  check_range(bandpass_hi_hz, "bandpass_hi_hz");
  if (std::max(std::abs(pitch_semitones.lo), std::abs(pitch_semitones.hi)) > 12.0) {
    throw Error("pitch shift limited to +-12 semitones");
  }
  if (spec.n_time_masks < 0 || spec.max_time_frames < 0 || spec.n_freq_masks < 0 ||
      spec.max_mel_bins < 0) {
    throw Error("mask counts and sizes must be non-negative");
  }
}

nlohmann::json AugmentConfig::to_json() const {
  return {{"enable_gain", enable_gain},
          {"enable_pitch", enable_pitch},
          {"enable_bandpass", enable_bandpass},
          {"gain_db_range", {gain_db.lo, gain_db.hi}},
          {"pitch_semitone_range", {pitch_semitones.lo, pitch_semitones.hi}},
          {"bandpass_lo_range", {bandpass_lo_hz.lo, bandpass_lo_hz.hi}},
          {"bandpass_hi_range", {bandpass_hi_hz.lo, bandpass_hi_hz.hi}},
          {"specaugment",
           {{"n_time_masks", spec.n_time_masks},
            {"max_time_frames", spec.max_time_frames},
            {"n_freq_masks", spec.n_freq_masks},
            {"max_mel_bins", spec.max_mel_bins}}},
          {"seed", seed}};
}

AugmentConfig AugmentConfig::from_json(const nlohmann::json& j) {
  AugmentConfig c;
  c.enable_gain = j.value("enable_gain", c.enable_gain);
  c.enable_pitch = j.value("enable_pitch", c.enable_pitch);
  c.enable_bandpass = j.value("enable_bandpass", c.enable_bandpass);
  c.gain_db = range_from(j, "gain_db_range", c.gain_db);
  c.pitch_semitones = range_from(j, "pitch_semitone_range", c.pitch_semitones);
  c.bandpass_lo_hz = range_from(j, "bandpass_lo_range", c.bandpass_lo_hz);
  c.bandpass_hi_hz = range_from(j, "bandpass_hi_range", c.bandpass_hi_hz);
  if (j.contains("specaugment")) {
    const auto& s = j.at("specaugment");
    c.spec.n_time_masks = s.value("n_time_masks", c.spec.n_time_masks);
    c.spec.max_time_frames = s.value("max_time_frames", c.spec.max_time_frames);
    c.spec.n_freq_masks = s.value("n_freq_masks", c.spec.n_freq_masks);
    c.spec.max_mel_bins = s.value("max_mel_bins", c.spec.max_mel_bins);
  }
  c.seed = j.value("seed", c.seed);
  c.validate();
  return c;
}

AudioClip apply_gain(const AudioClip& clip, double gain_db) {
  if (!std::isfinite(gain_db)) throw Error("gain must be finite");
  const double scale = std::pow(10.0, gain_db / 20.0);
  AudioClip out = clip;
  for (auto& ch : out.channels) {
    for (double& v : ch) v *= scale;
  }
  return out;
}

AudioClip pitch_shift(const AudioClip& clip, double semitones) {
  if (!(std::abs(semitones) <= 12.0)) throw Error("pitch shift limited to +-12 semitones");
  clip.validate();
  if (semitones == 0.0) return clip;
  const double ratio = std::pow(2.0, semitones / 12.0);
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  for (int c = 0; c < kFoaChannels; ++c) out.channels[c] = resample(clip.channels[c], ratio);
  return out;
}

Biquad Biquad::butterworth_highpass(double cutoff_hz, double sample_rate) {
  const double w0 = 2.0 * kPi * cutoff_hz / sample_rate;
  const double cw = std::cos(w0);
  const double alpha = std::sin(w0) / std::numbers::sqrt2;  // Q = 1/sqrt(2)
  const double a0 = 1.0 + alpha;
  return {(1.0 + cw) / 2.0 / a0, -(1.0 + cw) / a0, (1.0 + cw) / 2.0 / a0, -2.0 * cw / a0,
          (1.0 - alpha) / a0};
}

Biquad Biquad::butterworth_lowpass(double cutoff_hz, double sample_rate) {
  const double w0 = 2.0 * kPi * cutoff_hz / sample_rate;
  const double cw = std::cos(w0);
  const double alpha = std::sin(w0) / std::numbers::sqrt2;
  const double a0 = 1.0 + alpha;
  return {(1.0 - cw) / 2.0 / a0, (1.0 - cw) / a0, (1.0 - cw) / 2.0 / a0, -2.0 * cw / a0,
          (1.0 - alpha) / a0};
}

std::vector<double> Biquad::process(std::span<const double> x) const {
  std::vector<double> y(x.size());
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    const double out = b0 * x[n] + s1;
    s1 = b1 * x[n] - a1 * out + s2;
    s2 = b2 * x[n] - a2 * out;
    y[n] = out;
  }
  return y;
}

double Biquad::magnitude(double freq_hz, double sample_rate) const {
  const std::complex<double> z1 = std::polar(1.0, -2.0 * kPi * freq_hz / sample_rate);
  const std::complex<double> z2 = z1 * z1;
  return std::abs((b0 + b1 * z1 + b2 * z2) / (1.0 + a1 * z1 + a2 * z2));
}

AudioClip band_pass(const AudioClip& clip, double f_lo, double f_hi) {
  clip.validate();
  const double nyquist = clip.sample_rate / 2.0;
  if (!(f_lo > 0.0 && f_lo < f_hi && f_hi < nyquist)) {
    throw Error("invalid band: need 0 < f_lo < f_hi < " + std::to_string(nyquist) + " Hz");
  }
  const auto hp = Biquad::butterworth_highpass(f_lo, clip.sample_rate);
  const auto lp = Biquad::butterworth_lowpass(f_hi, clip.sample_rate);
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  for (int c = 0; c < kFoaChannels; ++c) out.channels[c] = lp.process(hp.process(clip.channels[c]));
  return out;
}

AudioClip augment_waveform(const AudioClip& clip, const AugmentConfig& config, Rng& rng) {
  config.validate();
  AudioClip out = clip;
  if (config.enable_gain) out = apply_gain(out, uniform(rng, config.gain_db));
  if (config.enable_pitch) out = pitch_shift(out, uniform(rng, config.pitch_semitones));
  if (config.enable_bandpass) {
    const double lo = uniform(rng, config.bandpass_lo_hz);
    const double hi = uniform(rng, config.bandpass_hi_hz);
    out = band_pass(out, lo, hi);
  }
  return out;
}

MaskPlan draw_masks(const SpecAugmentConfig& config, std::size_t frames, std::size_t mels,
                    Rng& rng) {
  const auto draw = [&rng](int max_width, std::size_t extent) {
    const std::size_t cap = std::min<std::size_t>(static_cast<std::size_t>(max_width), extent);
    const std::size_t width = std::uniform_int_distribution<std::size_t>(0, cap)(rng);
    const std::size_t begin = std::uniform_int_distribution<std::size_t>(0, extent - width)(rng);
    return MaskSpan{begin, width};
  };
  MaskPlan plan;
  for (int i = 0; i < config.n_time_masks; ++i) plan.time.push_back(draw(config.max_time_frames, frames));
  for (int i = 0; i < config.n_freq_masks; ++i) plan.freq.push_back(draw(config.max_mel_bins, mels));
  return plan;
}

FeatureTensor apply_masks(const FeatureTensor& features, const MaskPlan& plan) {
  FeatureTensor out = features;
  const std::size_t per_channel = features.frames * features.mels;
  for (std::size_t c = 0; c < features.channels; ++c) {
    double sum = 0.0;
    for (std::size_t i = 0; i < per_channel; ++i) sum += features.values[c * per_channel + i];
    const float mean = per_channel == 0 ? 0.0f : static_cast<float>(sum / per_channel);
    for (const auto& span : plan.time) {
      const std::size_t end = std::min(span.begin + span.width, features.frames);
      for (std::size_t t = span.begin; t < end; ++t) {
        for (std::size_t m = 0; m < features.mels; ++m) out.at(c, t, m) = mean;
      }
    }
    for (const auto& span : plan.freq) {
      const std::size_t end = std::min(span.begin + span.width, features.mels);
      for (std::size_t t = 0; t < features.frames; ++t) {
        for (std::size_t m = span.begin; m < end; ++m) out.at(c, t, m) = mean;
      }
    }
  }
  return out;
}

FeatureTensor spec_augment(const FeatureTensor& features, const SpecAugmentConfig& config,
                           Rng& rng) {
  return apply_masks(features, draw_masks(config, features.frames, features.mels, rng));
}

}  // namespace seld
