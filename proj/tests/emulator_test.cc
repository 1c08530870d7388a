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

#include "seld/emulator.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "oracles.h"
#include "seld/error.h"
#include "seld/features.h"
#include "seld/fft.h"
#include "test_util.h"

namespace seld {
namespace {

TEST(FoaGains, Examples) {
  const auto a = foa_encode_gains(Direction(0, 0));
  EXPECT_EQ(a, (std::array<double, 4>{1, 1, 0, 0}));
  const auto b = foa_encode_gains(Direction(0, 90));
  EXPECT_NEAR(b[0], 1, 1e-15);
  EXPECT_NEAR(b[1], 0, 1e-15);
  EXPECT_NEAR(b[2], 0, 1e-15);
  EXPECT_NEAR(b[3], 1, 1e-15);
  const auto c = foa_encode_gains(Direction(45, 45));
  EXPECT_NEAR(c[1], 0.5, 1e-12);
  EXPECT_NEAR(c[2], 0.5, 1e-12);
  EXPECT_NEAR(c[3], 0.70711, 1e-5);
}

TEST(SrirConfig, ValidationAndJson) {
  SrirSynthConfig c;
  EXPECT_NO_THROW(c.validate());
  c.ir_length_s = 0.004;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.rt60_s = 0;
  EXPECT_THROW(c.validate(), Error);
  const auto inf = SrirSynthConfig::from_json({{"direct_to_diffuse_db", nullptr}});
  EXPECT_TRUE(std::isinf(inf.direct_to_diffuse_db));
  EXPECT_TRUE(SrirSynthConfig::from_json(inf.to_json()).direct_to_diffuse_db > 1e300);
  const auto back = SrirSynthConfig::from_json(SrirSynthConfig{}.to_json());
  EXPECT_EQ(back.rt60_s, 0.3);
  EXPECT_EQ(back.direct_to_diffuse_db, 20.0);
}

TEST(Srir, InfiniteRatioIsPureDelta) {
  SrirSynthConfig c;
  c.direct_to_diffuse_db = INFINITY;
  Rng rng(1);
  const Direction d(30, -20);
  const auto ir = synth_srir(d, c, rng);
  const auto g = foa_encode_gains(d);
  const std::size_t delay = 120;  // 5 ms at 24 kHz
  EXPECT_EQ(ir.num_samples(), 12000u);
  for (int ch = 0; ch < 4; ++ch) {
    for (std::size_t i = 0; i < ir.num_samples(); ++i) {
      EXPECT_EQ(ir.channels[ch][i], i == delay ? g[ch] : 0.0);
    }
  }
}

TEST(Srir, DirectGainsAndTailEnergy) {
  SrirSynthConfig c;
  c.direct_to_diffuse_db = 12;
  Rng rng(2);
  const Direction d(-60, 35);
  const auto ir = synth_srir(d, c, rng);
  EXPECT_NEAR(ir.channels[kX][120] / ir.channels[kW][120],
              std::cos(oracle::rad(-60)) * std::cos(oracle::rad(35)), 1e-12);
  EXPECT_NEAR(ir.channels[kZ][120] / ir.channels[kW][120], std::sin(oracle::rad(35)), 1e-12);
  for (int ch = 0; ch < 4; ++ch) {
    double e = 0;
    for (std::size_t i = 121; i < ir.num_samples(); ++i) e += ir.channels[ch][i] * ir.channels[ch][i];
    EXPECT_NEAR(10 * std::log10(e), -12.0, 1e-9);
  }
  for (std::size_t i = 0; i < 120; ++i) EXPECT_EQ(ir.channels[kW][i], 0.0);
}

TEST(Srir, TailDecaysSixtyDbPerRt60) {
  for (double rt60 : {0.2, 0.3, 0.6}) {
    SrirSynthConfig c;
    c.rt60_s = rt60;
    c.ir_length_s = 1.0;
    Rng rng(3);
    const auto ir = synth_srir(Direction(0, 0), c, rng);
    // Least-squares line through block energies in dB.
    const std::size_t block = 240;
    std::vector<double> t, db;
    for (std::size_t b = 121; b + block <= ir.num_samples(); b += block) {
      double e = 0;
      for (int ch = 0; ch < 4; ++ch) {
        for (std::size_t i = b; i < b + block; ++i) e += ir.channels[ch][i] * ir.channels[ch][i];
      }
      t.push_back((b + block / 2.0) / 24000.0);
      db.push_back(10 * std::log10(e));
    }
    const double mt = std::accumulate(t.begin(), t.end(), 0.0) / t.size();
    const double md = std::accumulate(db.begin(), db.end(), 0.0) / db.size();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      num += (t[i] - mt) * (db[i] - md);
      den += (t[i] - mt) * (t[i] - mt);
    }
    EXPECT_NEAR(num / den * rt60, -60.0, 1.0) << "rt60 " << rt60;
  }
}

TEST(Srir, TailsIndependentAcrossChannels) {
  SrirSynthConfig c;
  Rng rng(4);
  const auto ir = synth_srir(Direction(0, 0), c, rng);
  double xy = 0, xx = 0, yy = 0;
  for (std::size_t i = 121; i < ir.num_samples(); ++i) {
    xy += ir.channels[kX][i] * ir.channels[kY][i];
    xx += ir.channels[kX][i] * ir.channels[kX][i];
    yy += ir.channels[kY][i] * ir.channels[kY][i];
  }
  EXPECT_LT(std::abs(xy) / std::sqrt(xx * yy), 0.1);
}

TEST(Convolve, MatchesDirectSum) {
  std::mt19937_64 gen(5);
  for (const auto [na, nb] : {std::pair{1, 1}, std::pair{3, 40}, std::pair{33, 33}, std::pair{100, 257},
                              std::pair{1000, 31}, std::pair{2049, 600}}) {
    const auto a = testing_util::white_noise(na, gen()), b = testing_util::white_noise(nb, gen());
    const auto got = convolve(a, b);
    const auto want = oracle::convolve(a, b);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-9);
  }
  EXPECT_TRUE(convolve(std::vector<double>{}, std::vector<double>{1.0}).empty());
}

TEST(RealFft, InverseRecovers) {
  const auto x = testing_util::white_noise(500, 9);
  RealFft f(500);
  std::vector<std::complex<double>> spec(f.num_bins());
  std::vector<double> back(500);
  f.forward(x, spec);
  f.inverse(spec, back);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(back[i], x[i], 1e-12);
}

TEST(RenderEvent, ImpulseSilenceAndLinearity) {
  SrirSynthConfig c;
  Rng rng(6);
  const auto ir = synth_srir(Direction(10, 10), c, rng);
  const std::vector<double> impulse{1.0};
  const auto r = render_event(impulse, 24000, ir);
  EXPECT_EQ(r.num_samples(), ir.num_samples());
  for (int ch = 0; ch < 4; ++ch) {
    for (std::size_t i = 0; i < ir.num_samples(); ++i) EXPECT_NEAR(r.channels[ch][i], ir.channels[ch][i], 1e-12);
  }
  const std::vector<double> silence(300, 0.0);
  const auto s = render_event(silence, 24000, ir);
  EXPECT_EQ(s.num_samples(), 300 + ir.num_samples() - 1);
  for (int ch = 0; ch < 4; ++ch) {
    for (double v : s.channels[ch]) EXPECT_NEAR(v, 0.0, 1e-12);
  }
  const auto x = testing_util::white_noise(700, 1);
  std::vector<double> x2(x);
  for (auto& v : x2) v *= 2;
  const auto a = render_event(x, 24000, ir), b = render_event(x2, 24000, ir);
  for (int ch = 0; ch < 4; ++ch) {
    for (std::size_t i = 0; i < a.num_samples(); i += 13) EXPECT_NEAR(b.channels[ch][i], 2 * a.channels[ch][i], 1e-9);
  }
  EXPECT_THROW(render_event(x, 48000, ir), Error);
}

SampleLibrary test_library() {
  SampleLibrary lib;
  lib.add({"a", 1, synth_sample(1, 1.0, 24000, 1)});
  lib.add({"b", 4, synth_sample(4, 0.55, 24000, 2)});
  lib.add({"c", 1, synth_sample(1, 0.3, 24000, 3)});
  return lib;
}

TEST(SynthSample, DeterministicAndClassDependent) {
  const auto a = synth_sample(2, 0.5, 24000, 7), b = synth_sample(2, 0.5, 24000, 7);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 12000u);
  EXPECT_NE(synth_sample(3, 0.5, 24000, 7), a);
  double e = 0;
  for (double v : a) e += v * v;
  EXPECT_GT(e, 0.0);
}

TEST(MixScene, EmptyIsNoiseOnly) {
  SceneSpec spec;
  spec.duration_s = 1.0;
  const auto scene = mix_scene(spec, test_library(), SrirSynthConfig{});
  EXPECT_TRUE(scene.annotation.empty());
  EXPECT_EQ(scene.clip.num_samples(), 24000u);
  double p = 0;
  for (const auto& ch : scene.clip.channels) {
    for (double v : ch) p += v * v;
  }
  EXPECT_GT(p, 0.0);
  EXPECT_NEAR(10 * std::log10(p / 24000), -30.0, 1e-9);
}

TEST(MixScene, LabelsCoverFloorOnsetToCeilEnd) {
  SceneSpec spec;
  spec.duration_s = 3.0;
  spec.events.push_back({4, "b", 0.25, Direction(-30, 10)});  // 0.25 .. 0.80 s
  const auto scene = mix_scene(spec, test_library(), SrirSynthConfig{});
  std::vector<int> frames;
  for (const auto& e : scene.annotation.events()) {
    frames.push_back(e.frame);
    EXPECT_EQ(e.class_id, 4);
    EXPECT_EQ(e.direction, Direction(-30, 10));
  }
  std::vector<int> want;
  for (int f = 2; f < 8; ++f) want.push_back(f);
  EXPECT_EQ(frames, want);
}

TEST(MixScene, ConcurrentEventsAndSameClassTracks) {
  SceneSpec spec;
  spec.duration_s = 3.0;
  spec.events.push_back({1, "a", 0.0, Direction(0, 0)});
  spec.events.push_back({4, "b", 0.5, Direction(90, 0)});
  spec.events.push_back({1, "c", 0.45, Direction(-90, 0)});
  const auto scene = mix_scene(spec, test_library(), SrirSynthConfig{});
  int class4 = 0, track1 = 0;
  for (const auto& e : scene.annotation.events()) {
    if (e.class_id == 4) ++class4;
    if (e.class_id == 1 && e.track_id == 1) {
      ++track1;
      EXPECT_EQ(e.direction, Direction(-90, 0));
    }
  }
  EXPECT_EQ(class4, 6);   // frames 5..10
  EXPECT_EQ(track1, 4);   // frames 4..7
}

TEST(MixScene, SnrMeasuredOverActiveSamples) {
  SceneSpec spec;
  spec.duration_s = 2.0;
  spec.seed = 17;
  spec.events.push_back({1, "a", 0.4, Direction(50, 5)});
  spec.snr_db = 300;
  const auto clean = mix_scene(spec, test_library(), SrirSynthConfig{});
  for (double snr : {0.0, 10.0, 25.0}) {
    spec.snr_db = snr;
    const auto noisy = mix_scene(spec, test_library(), SrirSynthConfig{});
    double ps = 0, pn = 0;
    for (std::size_t i = 9600; i < 9600 + 24000; ++i) {
      for (int c = 0; c < 4; ++c) {
        const double s = clean.clip.channels[c][i];
        const double n = noisy.clip.channels[c][i] - s;
        ps += s * s;
        pn += n * n;
      }
    }
    EXPECT_NEAR(10 * std::log10(ps / pn), snr, 1e-6);
  }
}

TEST(MixScene, SingleSourceDoa) {
  SceneSpec spec;
  spec.duration_s = 2.0;
  spec.snr_db = 40;
  spec.events.push_back({1, "a", 0.5, Direction(0, 0)});
  const auto scene = mix_scene(spec, test_library(), SrirSynthConfig{});
  const FeatureConfig fc;
  const auto doa = intensity_doa(scene.clip, fc, 20, 60);
  EXPECT_LT(angular_distance(doa, Direction(0, 0)), 5.0);
}

TEST(MixScene, Errors) {
  SceneSpec spec;
  spec.duration_s = 1.0;
  spec.events.push_back({1, "zzz", 0.0, Direction(0, 0)});
  EXPECT_THROW(mix_scene(spec, test_library(), SrirSynthConfig{}), Error);
  spec.events[0] = {2, "a", 0.0, Direction(0, 0)};
  EXPECT_THROW(mix_scene(spec, test_library(), SrirSynthConfig{}), Error);
  spec.events[0] = {1, "a", 0.5, Direction(0, 0)};
  EXPECT_THROW(mix_scene(spec, test_library(), SrirSynthConfig{}), Error);
  spec.events.clear();
  spec.snr_db = INFINITY;
  EXPECT_THROW(mix_scene(spec, test_library(), SrirSynthConfig{}), Error);
}

TEST(MixScene, DeterministicPerSeed) {
  SceneSpec spec;
  spec.duration_s = 1.5;
  spec.events.push_back({4, "b", 0.1, Direction(0, 30)});
  spec.seed = 1;
  const auto a = mix_scene(spec, test_library(), SrirSynthConfig{});
  const auto b = mix_scene(spec, test_library(), SrirSynthConfig{});
  EXPECT_EQ(a.clip, b.clip);
  spec.seed = 2;
  EXPECT_NE(mix_scene(spec, test_library(), SrirSynthConfig{}).clip, a.clip);
}

TEST(SceneSpec, JsonRoundTrip) {
  SceneSpec spec;
  spec.duration_s = 4;
  spec.snr_db = 12;
  spec.seed = 3;
  spec.events.push_back({2, "x", 0.5, Direction(-45, 10)});
  const auto back = SceneSpec::from_json(spec.to_json());
  EXPECT_EQ(back.duration_s, 4);
  ASSERT_EQ(back.events.size(), 1u);
  EXPECT_EQ(back.events[0].sample_id, "x");
  EXPECT_EQ(back.events[0].direction, Direction(-45, 10));
}

TEST(Library, ParseSyntheticAndFile) {
  testing_util::TempDir dir;
  Waveform mono{24000, {testing_util::white_noise(100, 1)}};
  write_wav(dir / "s.wav", mono);
  testing_util::spit(dir / "lib.json", R"({"sample_rate": 24000, "samples": [
    {"id": "f", "class_id": 2, "path": "s.wav"},
    {"id": "g", "class_id": 5, "synthetic": {"duration_s": 0.2, "seed": 4}}]})");
  const auto lib = read_library(dir / "lib.json");
  EXPECT_EQ(lib.size(), 2u);
  EXPECT_EQ(lib.at("f").waveform.size(), 100u);
  EXPECT_EQ(lib.at("g").waveform.size(), 4800u);
  EXPECT_EQ(lib.at("g").class_id, 5);
  EXPECT_THROW(lib.at("nope"), Error);
  EXPECT_EQ(lib.class_counts(), (std::map<int, std::size_t>{{2, 1}, {5, 1}}));
}

SampleLibrary counted_library(const std::map<int, int>& counts) {
  SampleLibrary lib;
  for (const auto& [cls, n] : counts) {
    for (int i = 0; i < n; ++i) lib.add({"c" + std::to_string(cls) + "_" + std::to_string(i), cls, {1.0}});
  }
  return lib;
}

std::set<std::string> ids(const SampleLibrary& lib) {
  std::set<std::string> out;
  for (const auto& [id, s] : lib.samples()) out.insert(id);
  return out;
}

TEST(Balance, Examples) {
  const auto even = counted_library({{0, 3}, {1, 3}});
  EXPECT_EQ(ids(balance_classes(even, 1)), ids(even));
  const auto lib = counted_library({{0, 10}, {1, 4}});
  const auto b = balance_classes(lib, 7);
  EXPECT_EQ(b.class_counts(), (std::map<int, std::size_t>{{0, 4}, {1, 4}}));
  EXPECT_EQ(ids(balance_classes(lib, 7)), ids(b));
  std::set<std::set<std::string>> variants;
  for (std::uint64_t s = 0; s < 10; ++s) variants.insert(ids(balance_classes(lib, s)));
  EXPECT_GT(variants.size(), 1u);
  for (const auto& id : ids(b)) EXPECT_TRUE(lib.contains(id));
  EXPECT_THROW(balance_classes(SampleLibrary{}, 0), Error);
}

DatasetManifest manifest_of(const std::string& prefix, int n, Origin origin) {
  DatasetManifest m;
  for (int i = 0; i < n; ++i) {
    m.entries.push_back({prefix + std::to_string(i) + ".wav", prefix + std::to_string(i) + ".csv", origin,
                         std::nullopt, std::nullopt, std::nullopt, 5.0});
  }
  return m;
}

TEST(SampleEpoch, EqualSizesUseAllEmulated) {
  const auto real = manifest_of("r", 6, Origin::kReal), emu = manifest_of("e", 6, Origin::kEmulated);
  const auto out = sample_epoch(real, emu, 3);
  EXPECT_FALSE(out.emulated_missing);
  EXPECT_EQ(out.manifest.size(), 12u);
  std::multiset<std::string> clips;
  for (const auto& e : out.manifest.entries) clips.insert(e.clip_path);
  for (const auto& e : real.entries) EXPECT_EQ(clips.count(e.clip_path), 1u);
  for (const auto& e : emu.entries) EXPECT_EQ(clips.count(e.clip_path), 1u);
}

TEST(SampleEpoch, LargeEmulatedPoolSubsets) {
  const auto real = manifest_of("r", 5, Origin::kReal), emu = manifest_of("e", 50, Origin::kEmulated);
  std::set<std::set<std::string>> subsets;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto out = sample_epoch(real, emu, s);
    std::set<std::string> picked;
    std::multiset<std::string> real_seen;
    for (const auto& e : out.manifest.entries) {
      if (e.origin == Origin::kEmulated) {
        EXPECT_TRUE(picked.insert(e.clip_path).second) << "drawn twice";
      } else {
        real_seen.insert(e.clip_path);
      }
    }
    EXPECT_EQ(picked.size(), 5u);
    EXPECT_EQ(real_seen.size(), 5u);
    EXPECT_EQ(std::set<std::string>(real_seen.begin(), real_seen.end()).size(), 5u);
    subsets.insert(picked);
  }
  EXPECT_GE(subsets.size(), 19u);
}

TEST(SampleEpoch, EmptyEmulatedAndReplacement) {
  const auto real = manifest_of("r", 4, Origin::kReal);
  const auto none = sample_epoch(real, DatasetManifest{}, 1);
  EXPECT_TRUE(none.emulated_missing);
  EXPECT_EQ(none.manifest.size(), 4u);
  const auto few = sample_epoch(real, manifest_of("e", 2, Origin::kEmulated), 1);
  EXPECT_EQ(few.manifest.size(), 8u);
  EXPECT_THROW(sample_epoch(DatasetManifest{}, real, 1), Error);
}

TEST(SampleEpoch, ShuffledAndDeterministic) {
  const auto real = manifest_of("r", 20, Origin::kReal), emu = manifest_of("e", 40, Origin::kEmulated);
  const auto a = sample_epoch(real, emu, 9), b = sample_epoch(real, emu, 9);
  EXPECT_EQ(a.manifest.entries, b.manifest.entries);
  bool real_prefix = true;
  for (std::size_t i = 0; i < 20; ++i) real_prefix = real_prefix && a.manifest.entries[i].origin == Origin::kReal;
  EXPECT_FALSE(real_prefix);
}

}  // namespace
}  // namespace seld
