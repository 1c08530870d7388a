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

#include "seld/features.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "seld/error.h"
#include "seld/fft.h"
#include "seld/tensor_io.h"

namespace seld {

void FeatureConfig::validate() const {
  if (sample_rate <= 0) throw Error("sample_rate must be positive");
  if (nfft <= 0 || window <= 0 || hop <= 0) throw Error("nfft, window and hop must be positive");
  if (window > nfft) throw Error("window must not exceed nfft");
  if (hop > window) throw Error("hop must not exceed window");
  if (n_mels < 1) throw Error("n_mels must be at least 1");
  if (!(floor_eps > 0.0)) throw Error("floor_eps must be positive");
}

std::size_t FeatureConfig::num_frames(std::size_t num_samples) const {
  return 1 + num_samples / static_cast<std::size_t>(hop);
}

nlohmann::json FeatureConfig::to_json() const {
  return {{"sample_rate", sample_rate}, {"nfft", nfft},   {"hop", hop},
          {"window", window},           {"n_mels", n_mels}, {"floor_eps", floor_eps}};
}

FeatureConfig FeatureConfig::from_json(const nlohmann::json& j) {
  FeatureConfig c;
  c.sample_rate = j.value("sample_rate", c.sample_rate);
  c.nfft = j.value("nfft", c.nfft);
  c.hop = j.value("hop", c.hop);
  c.window = j.value("window", c.window);
  c.n_mels = j.value("n_mels", c.n_mels);
  c.floor_eps = j.value("floor_eps", c.floor_eps);
  c.validate();
  return c;
}

std::vector<double> hann_window(int length) {
  std::vector<double> w(static_cast<std::size_t>(length));
  for (int n = 0; n < length; ++n) {
    w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / length);
  }
  return w;
}

namespace {

// Mirror index without repeating the edge sample, valid for any offset.
std::size_t reflect_index(long long i, std::size_t n) {
  if (n == 1) return 0;
  const long long period = 2 * static_cast<long long>(n - 1);
  long long m = i % period;
  if (m < 0) m += period;
  if (m >= static_cast<long long>(n)) m = period - m;
  return static_cast<std::size_t>(m);
}

std::array<Spectrogram, kFoaChannels> clip_spectrograms(const AudioClip& clip,
                                                        const FeatureConfig& config) {
  clip.validate();
  config.validate();
  if (clip.sample_rate != config.sample_rate) {
    throw Error("sample-rate mismatch: clip " + std::to_string(clip.sample_rate) + " Hz, config " +
                std::to_string(config.sample_rate) + " Hz");
  }
  std::array<Spectrogram, kFoaChannels> specs;
  for (int c = 0; c < kFoaChannels; ++c) specs[c] = stft(clip.channels[c], config);
  return specs;
}

FeatureTensor log_mel_from(const std::array<Spectrogram, kFoaChannels>& specs,
                           const MelFilterbank& fb, const FeatureConfig& config) {
  const std::size_t frames = specs[0].frames;
  FeatureTensor out(kFoaChannels, frames, static_cast<std::size_t>(config.n_mels));
  std::vector<double> power(specs[0].bins);
  for (int c = 0; c < kFoaChannels; ++c) {
    for (std::size_t t = 0; t < frames; ++t) {
      for (std::size_t k = 0; k < power.size(); ++k) power[k] = std::norm(specs[c].at(t, k));
      for (int m = 0; m < config.n_mels; ++m) {
        double acc = 0.0;
        for (int k = 0; k < fb.n_bins; ++k) acc += fb.at(m, k) * power[k];
        out.at(c, t, m) = static_cast<float>(std::log(acc + config.floor_eps));
      }
    }
  }
  return out;
}

FeatureTensor intensity_from(const Spectrogram& w, const Spectrogram& x, const Spectrogram& y,
                             const Spectrogram& z, const MelFilterbank& fb,
                             const FeatureConfig& config) {
  for (const Spectrogram* s : {&x, &y, &z}) {
    if (s->frames != w.frames || s->bins != w.bins) throw Error("spectrogram dims differ");
  }
  if (w.bins != static_cast<std::size_t>(fb.n_bins)) throw Error("spectrogram bins do not match nfft");
  const std::size_t frames = w.frames;
  FeatureTensor out(3, frames, static_cast<std::size_t>(config.n_mels));
  std::array<std::vector<double>, 3> bin_intensity;
  for (auto& v : bin_intensity) v.resize(w.bins);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t k = 0; k < w.bins; ++k) {
      const auto cw = std::conj(w.at(t, k));
      bin_intensity[0][k] = (cw * x.at(t, k)).real();
      bin_intensity[1][k] = (cw * y.at(t, k)).real();
      bin_intensity[2][k] = (cw * z.at(t, k)).real();
    }
    for (int m = 0; m < config.n_mels; ++m) {
      Vec3 acc;
      for (int k = 0; k < fb.n_bins; ++k) {
        const double g = fb.at(m, k);
        if (g == 0.0) continue;
        acc += Vec3{bin_intensity[0][k], bin_intensity[1][k], bin_intensity[2][k]} * g;
      }
      const double n = norm(acc);
      if (n > config.floor_eps) {
        out.at(0, t, m) = static_cast<float>(acc.x / n);
        out.at(1, t, m) = static_cast<float>(acc.y / n);
        out.at(2, t, m) = static_cast<float>(acc.z / n);
      }
    }
  }
  return out;
}

}  // namespace

Spectrogram stft(std::span<const double> samples, const FeatureConfig& config) {
  config.validate();
  if (samples.empty()) throw Error("stft needs at least one sample");
  const std::size_t n = samples.size();
  const std::size_t nfft = static_cast<std::size_t>(config.nfft);
  const long long pad = config.nfft / 2;
  const std::size_t offset = (nfft - static_cast<std::size_t>(config.window)) / 2;
  const auto window = hann_window(config.window);
  const RealFft fft(nfft);

  Spectrogram spec;
  spec.frames = config.num_frames(n);
  spec.bins = fft.num_bins();
  spec.values.resize(spec.frames * spec.bins);
  std::vector<double> frame(nfft);
  for (std::size_t t = 0; t < spec.frames; ++t) {
    std::fill(frame.begin(), frame.end(), 0.0);
    const long long start = static_cast<long long>(t) * config.hop - pad;
    for (int i = 0; i < config.window; ++i) {
      const long long src = start + static_cast<long long>(offset) + i;
      frame[offset + i] = window[i] * samples[reflect_index(src, n)];
    }
    fft.forward(frame, std::span(spec.values).subspan(t * spec.bins, spec.bins));
  }
  return spec;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbank mel_filterbank(const FeatureConfig& config) {
  config.validate();
  MelFilterbank fb;
  fb.n_mels = config.n_mels;
  fb.n_bins = config.nfft / 2 + 1;
  fb.weights.assign(static_cast<std::size_t>(fb.n_mels) * fb.n_bins, 0.0);

  const double top = hz_to_mel(config.sample_rate / 2.0);
  std::vector<double> edges(static_cast<std::size_t>(fb.n_mels) + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(top * static_cast<double>(i) / static_cast<double>(fb.n_mels + 1));
  }
  edges.front() = 0.0;
  edges.back() = config.sample_rate / 2.0;
  const double bin_hz = static_cast<double>(config.sample_rate) / config.nfft;
  for (int m = 0; m < fb.n_mels; ++m) {
    const double lo = edges[m], center = edges[m + 1], hi = edges[m + 2];
    fb.center_hz.push_back(center);
    bool any = false;
    for (int k = 0; k < fb.n_bins; ++k) {
      const double f = k * bin_hz;
      const double w = std::max(0.0, std::min((f - lo) / (center - lo), (hi - f) / (hi - center)));
      fb.weights[static_cast<std::size_t>(m) * fb.n_bins + k] = w;
      any = any || w > 0.0;
    }
    if (!any) {
      throw Error("n_mels = " + std::to_string(fb.n_mels) + " is too large for nfft = " +
                  std::to_string(config.nfft) + ": mel band " + std::to_string(m) +
                  " covers no FFT bin");
    }
  }
  return fb;
}

FeatureTensor log_mel(const AudioClip& clip, const FeatureConfig& config) {
  const auto specs = clip_spectrograms(clip, config);
  return log_mel_from(specs, mel_filterbank(config), config);
}

FeatureTensor intensity_vector(const Spectrogram& w, const Spectrogram& x, const Spectrogram& y,
                               const Spectrogram& z, const FeatureConfig& config) {
  return intensity_from(w, x, y, z, mel_filterbank(config), config);
}

FeatureTensor extract_features(const AudioClip& clip, const FeatureConfig& config) {
  const auto specs = clip_spectrograms(clip, config);
  const auto fb = mel_filterbank(config);
  const auto mel = log_mel_from(specs, fb, config);
  const auto iv = intensity_from(specs[kW], specs[kX], specs[kY], specs[kZ], fb, config);
  FeatureTensor out(kFeatureChannels, mel.frames, mel.mels);
  std::copy(mel.values.begin(), mel.values.end(), out.values.begin());
  std::copy(iv.values.begin(), iv.values.end(),
            out.values.begin() + static_cast<std::ptrdiff_t>(mel.values.size()));
  return out;
}

Direction intensity_doa(const AudioClip& clip, const FeatureConfig& config,
                        std::size_t frame_begin, std::size_t frame_end) {
  const auto specs = clip_spectrograms(clip, config);
  frame_end = std::min(frame_end, specs[kW].frames);
  Vec3 acc;
  for (std::size_t t = frame_begin; t < frame_end; ++t) {
    for (std::size_t k = 0; k < specs[kW].bins; ++k) {
      const auto cw = std::conj(specs[kW].at(t, k));
      acc += Vec3{(cw * specs[kX].at(t, k)).real(), (cw * specs[kY].at(t, k)).real(),
                  (cw * specs[kZ].at(t, k)).real()};
    }
  }
  return unit_to_dir(acc);
}

std::optional<Direction> feature_doa(const FeatureTensor& features, std::size_t frame_begin,
                                     std::size_t frame_end) {
  if (features.channels != kFeatureChannels) throw Error("expected a 7-channel feature tensor");
  frame_end = std::min(frame_end, features.frames);
  Vec3 acc;
  for (std::size_t t = frame_begin; t < frame_end; ++t) {
    for (std::size_t m = 0; m < features.mels; ++m) {
      acc += Vec3{features.at(4, t, m), features.at(5, t, m), features.at(6, t, m)};
    }
  }
  if (!(norm(acc) > 0.0)) return std::nullopt;
  return unit_to_dir(acc);
}

void write_features(const std::filesystem::path& path, const FeatureTensor& features,
                    const FeatureConfig& config) {
  const std::array dims{features.channels, features.frames, features.mels};
  nlohmann::json header;
  header["channel_names"] = {"logmel_w", "logmel_x", "logmel_y", "logmel_z",
                             "intensity_x", "intensity_y", "intensity_z"};
  header["config"] = config.to_json();
  write_tensor(path, dims, features.values, header);
}

FeatureTensor read_features(const std::filesystem::path& path) {
  auto stored = read_tensor(path);
  if (stored.dims.size() != 3) throw Error(path.string() + ": feature tensor must be 3-D");
  FeatureTensor out;
  out.channels = stored.dims[0];
  out.frames = stored.dims[1];
  out.mels = stored.dims[2];
  out.values = std::move(stored.values);
  return out;
}

}  // namespace seld
