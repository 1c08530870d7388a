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

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "oracles.h"
#include "seld/error.h"
#include "seld/features.h"
#include "test_util.h"

namespace seld {
namespace {

using testing_util::plane_wave;
using testing_util::sine;
using testing_util::white_noise;

double rms(const std::vector<double>& x, std::size_t from = 0) {
  double s = 0;
  for (std::size_t i = from; i < x.size(); ++i) s += x[i] * x[i];
  return std::sqrt(s / static_cast<double>(x.size() - from));
}

// Magnitude of one DFT bin, computed directly.
double dft_mag(const std::vector<double>& x, std::size_t n, double k) {
  std::complex<double> acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * std::polar(1.0, -2.0 * oracle::kPi * k * i / n);
  return std::abs(acc);
}

TEST(Gain, ZeroIsIdentityAndSixDbDoubles) {
  const auto clip = plane_wave(white_noise(1000, 1), Direction(20, 30));
  EXPECT_EQ(apply_gain(clip, 0.0), clip);
  const auto g = apply_gain(clip, 6.0206);
  for (int c = 0; c < 4; ++c) {
    for (std::size_t i = 0; i < clip.num_samples(); ++i) {
      EXPECT_NEAR(g.channels[c][i], 2.0 * clip.channels[c][i], 1e-5 * std::abs(clip.channels[c][i]) + 1e-12);
    }
  }
  EXPECT_THROW(apply_gain(clip, INFINITY), Error);
}

TEST(Gain, KeepsDoa) {
  const FeatureConfig c;
  const Direction d(-70, 25);
  const auto clip = plane_wave(white_noise(9600, 2), d);
  for (double g : {-6.0, -1.5, 3.0, 6.0}) {
    EXPECT_LT(angular_distance(intensity_doa(apply_gain(clip, g), c), intensity_doa(clip, c)), 1e-9);
  }
}

TEST(PitchShift, ZeroIsIdentity) {
  const auto clip = plane_wave(white_noise(1000, 1), Direction(0, 0));
  EXPECT_EQ(pitch_shift(clip, 0.0), clip);
}

TEST(PitchShift, OctaveUpMoves440To880) {
  const std::size_t n = 48000, frame = 16384;
  AudioClip clip(24000, n);
  clip.channels[kW] = sine(440.0, n);
  const auto out = pitch_shift(clip, 12.0);
  const double bin_hz = 24000.0 / frame;
  double best_k = 0, best = -1;
  for (double k = std::floor(700 / bin_hz); k < 1000 / bin_hz; k += 1) {
    const double m = dft_mag(out.channels[kW], frame, k);
    if (m > best) {
      best = m;
      best_k = k;
    }
  }
  EXPECT_NEAR(best_k, 880.0 / bin_hz, 1.0);
}

TEST(PitchShift, LengthAlwaysPreserved) {
  for (double s : {-12.0, -2.0, -0.3, 0.7, 2.0, 12.0}) {
    const auto out = pitch_shift(AudioClip(24000, 777), s);
    for (int c = 0; c < 4; ++c) EXPECT_EQ(out.channels[c].size(), 777u);
  }
  EXPECT_THROW(pitch_shift(AudioClip(24000, 10), 12.5), Error);
}

TEST(PitchShift, SameTransformOnAllChannels) {
  const FeatureConfig c;
  const Direction d(135, -30);
  const auto clip = plane_wave(white_noise(24000, 5), d);
  for (double s : {-2.0, 1.3}) {
    const auto out = pitch_shift(clip, s);
    const auto g = foa_encode_gains(d);
    for (int ch = 1; ch < 4; ++ch) {
      for (std::size_t i = 0; i < out.num_samples(); i += 97) {
        EXPECT_NEAR(out.channels[ch][i], g[ch] * out.channels[kW][i], 1e-9);
      }
    }
    EXPECT_LT(angular_distance(intensity_doa(out, c), d), 1.0);
  }
}

// Bilinear-transform Butterworth with prewarping: |H|^2 = 1 / (1 + r^4),
// r = tan(pi f / fs) / tan(pi fc / fs) for the low-pass and its reciprocal for
// the high-pass.
double analog_lp(double f, double fc, double fs) {
  const double r = std::tan(oracle::kPi * f / fs) / std::tan(oracle::kPi * fc / fs);
  return 1.0 / std::sqrt(1.0 + std::pow(r, 4));
}
double analog_hp(double f, double fc, double fs) {
  const double r = std::tan(oracle::kPi * fc / fs) / std::tan(oracle::kPi * f / fs);
  return 1.0 / std::sqrt(1.0 + std::pow(r, 4));
}

TEST(Biquad, MatchesPrewarpedButterworth) {
  const double fs = 24000;
  for (double fc : {50.0, 137.0, 1000.0, 6000.0, 10000.0}) {
    const auto lp = Biquad::butterworth_lowpass(fc, fs);
    const auto hp = Biquad::butterworth_highpass(fc, fs);
    for (double f : {10.0, 100.0, 500.0, 999.0, 3000.0, 7000.0, 11000.0}) {
      EXPECT_NEAR(lp.magnitude(f, fs), analog_lp(f, fc, fs), 1e-9) << fc << " " << f;
      EXPECT_NEAR(hp.magnitude(f, fs), analog_hp(f, fc, fs), 1e-9) << fc << " " << f;
    }
    EXPECT_NEAR(lp.magnitude(fc, fs), std::sqrt(0.5), 1e-9);
  }
}

TEST(Biquad, ProcessMatchesMagnitudeOnTones) {
  const double fs = 24000;
  const auto lp = Biquad::butterworth_lowpass(2000, fs);
  for (double f : {500.0, 2000.0, 5000.0}) {
    const auto x = sine(f, 48000);
    const auto y = lp.process(x);
    EXPECT_NEAR(rms(y, 24000) / rms(x, 24000), lp.magnitude(f, fs), 2e-3);
  }
}

TEST(BandPass, KillsDc) {
  AudioClip clip(24000, 48000);
  for (auto& ch : clip.channels) ch.assign(48000, 0.7);
  const auto out = band_pass(clip, 100, 8000);
  for (int c = 0; c < 4; ++c) EXPECT_LT(rms(out.channels[c], 24000), 0.01 * 0.7);
}

TEST(BandPass, CentreAndStopband) {
  const double lo = 200, hi = 4000;
  const double centre = std::sqrt(lo * hi);
  AudioClip a(24000, 48000), b(24000, 48000);
  a.channels[kW] = sine(centre, 48000);
  b.channels[kW] = sine(2 * hi, 48000);
  const double att_c = 20 * std::log10(rms(band_pass(a, lo, hi).channels[kW], 24000) / rms(a.channels[kW], 24000));
  const double att_s = 20 * std::log10(rms(band_pass(b, lo, hi).channels[kW], 24000) / rms(b.channels[kW], 24000));
  EXPECT_GT(att_c, -3.0);
  EXPECT_LT(att_s, -10.0);
  const double analytic_c = 20 * std::log10(analog_hp(centre, lo, 24000) * analog_lp(centre, hi, 24000));
  EXPECT_NEAR(att_c, analytic_c, 0.05);
}

TEST(BandPass, InvalidBand) {
  const AudioClip clip(24000, 100);
  EXPECT_THROW(band_pass(clip, 0, 1000), Error);
  EXPECT_THROW(band_pass(clip, 2000, 1000), Error);
  EXPECT_THROW(band_pass(clip, 100, 12000), Error);
}

TEST(BandPass, KeepsDoaOnSustainedTone) {
  const FeatureConfig c;
  const Direction d(40, -15);
  const auto clip = plane_wave(sine(1500, 24000), d);
  EXPECT_LT(angular_distance(intensity_doa(band_pass(clip, 150, 7000), c), d), 1.0);
}

TEST(AugmentConfig, ValidationAndJson) {
  AugmentConfig c;
  EXPECT_NO_THROW(c.validate());
  c.gain_db = {3, -3};
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.spec.max_mel_bins = -1;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.gain_db = {-1, 2};
  c.spec.n_time_masks = 5;
  c.enable_pitch = false;
  c.seed = 99;
  const auto back = AugmentConfig::from_json(c.to_json());
  EXPECT_EQ(back.gain_db.lo, -1);
  EXPECT_EQ(back.gain_db.hi, 2);
  EXPECT_EQ(back.spec.n_time_masks, 5);
  EXPECT_FALSE(back.enable_pitch);
  EXPECT_EQ(back.seed, 99u);
}

TEST(AugmentWaveform, DeterministicAndDoaPreserving) {
  const FeatureConfig fc;
  const Direction d(-120, 35);
  const auto clip = plane_wave(white_noise(24000, 3), d);
  AugmentConfig c;
  Rng r1(5), r2(5), r3(6);
  const auto a = augment_waveform(clip, c, r1);
  const auto b = augment_waveform(clip, c, r2);
  const auto e = augment_waveform(clip, c, r3);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, e);
  EXPECT_LT(angular_distance(intensity_doa(a, fc), d), 1.0);
}

FeatureTensor ramp_tensor(std::size_t frames, std::size_t mels) {
  FeatureTensor t(kFeatureChannels, frames, mels);
  for (std::size_t i = 0; i < t.values.size(); ++i) t.values[i] = static_cast<float>(std::sin(0.37 * i));
  return t;
}

TEST(SpecAugment, ZeroMasksIsIdentity) {
  const auto t = ramp_tensor(50, 16);
  Rng rng(1);
  EXPECT_EQ(spec_augment(t, SpecAugmentConfig{0, 20, 0, 8}, rng), t);
}

TEST(SpecAugment, FullWidthMaskMakesChannelsConstant) {
  const auto t = ramp_tensor(30, 16);
  MaskPlan plan;
  plan.time.push_back({0, 30});
  const auto out = apply_masks(t, plan);
  for (std::size_t c = 0; c < t.channels; ++c) {
    double mean = 0;
    for (std::size_t f = 0; f < t.frames; ++f) {
      for (std::size_t m = 0; m < t.mels; ++m) mean += t.at(c, f, m);
    }
    mean /= static_cast<double>(t.frames * t.mels);
    for (std::size_t f = 0; f < t.frames; ++f) {
      for (std::size_t m = 0; m < t.mels; ++m) {
        EXPECT_EQ(out.at(c, f, m), out.at(c, 0, 0));
        EXPECT_NEAR(out.at(c, f, m), mean, 1e-6);
      }
    }
  }
  // Drawn masks reach full width for some seed when max equals the extent.
  bool full = false;
  for (std::uint64_t s = 0; s < 200 && !full; ++s) {
    Rng rng(s);
    const auto p = draw_masks(SpecAugmentConfig{1, 30, 0, 0}, 30, 16, rng);
    full = p.time[0].width == 30;
  }
  EXPECT_TRUE(full);
}

TEST(SpecAugment, SeedsControlPositions) {
  const SpecAugmentConfig c;
  int differ = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    Rng a(s), b(s), other(s + 1000);
    const auto pa = draw_masks(c, 201, 64, a), pb = draw_masks(c, 201, 64, b), po = draw_masks(c, 201, 64, other);
    for (std::size_t i = 0; i < pa.time.size(); ++i) {
      EXPECT_EQ(pa.time[i].begin, pb.time[i].begin);
      EXPECT_EQ(pa.time[i].width, pb.time[i].width);
    }
    bool same = true;
    for (std::size_t i = 0; i < pa.time.size(); ++i) {
      same = same && pa.time[i].begin == po.time[i].begin && pa.time[i].width == po.time[i].width;
    }
    for (std::size_t i = 0; i < pa.freq.size(); ++i) {
      same = same && pa.freq[i].begin == po.freq[i].begin && pa.freq[i].width == po.freq[i].width;
    }
    differ += same ? 0 : 1;
  }
  EXPECT_GE(differ, 95);
}

TEST(SpecAugment, ChangedCellsBoundedAndAligned) {
  const auto t = ramp_tensor(120, 32);
  const SpecAugmentConfig c{3, 15, 2, 6};
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng rng(s);
    const auto plan = draw_masks(c, t.frames, t.mels, rng);
    std::size_t bound = 0;
    for (const auto& sp : plan.time) {
      EXPECT_LE(sp.width, 15u);
      EXPECT_LE(sp.begin + sp.width, t.frames);
      bound += sp.width * t.mels;
    }
    for (const auto& sp : plan.freq) {
      EXPECT_LE(sp.width, 6u);
      EXPECT_LE(sp.begin + sp.width, t.mels);
      bound += sp.width * t.frames;
    }
    const auto out = apply_masks(t, plan);
    std::vector<bool> masked(t.frames * t.mels, false);
    for (const auto& sp : plan.time) {
      for (std::size_t f = sp.begin; f < sp.begin + sp.width; ++f) {
        for (std::size_t m = 0; m < t.mels; ++m) masked[f * t.mels + m] = true;
      }
    }
    for (const auto& sp : plan.freq) {
      for (std::size_t f = 0; f < t.frames; ++f) {
        for (std::size_t m = sp.begin; m < sp.begin + sp.width; ++m) masked[f * t.mels + m] = true;
      }
    }
    for (std::size_t ch = 0; ch < t.channels; ++ch) {
      std::size_t changed = 0;
      for (std::size_t f = 0; f < t.frames; ++f) {
        for (std::size_t m = 0; m < t.mels; ++m) {
          if (!masked[f * t.mels + m]) {
            EXPECT_EQ(out.at(ch, f, m), t.at(ch, f, m));
          } else if (out.at(ch, f, m) != t.at(ch, f, m)) {
            ++changed;
          }
        }
      }
      EXPECT_LE(changed, bound);
    }
  }
}

}  // namespace
}  // namespace seld
