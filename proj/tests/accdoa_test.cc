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

#include "seld/accdoa.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.h"
#include "seld/error.h"
#include "seld/predictor.h"
#include "seld/rotation.h"
#include "test_util.h"

namespace seld {
namespace {

TEST(Encode, EmptyIsZero) {
  const auto s = encode(ClipAnnotation(), 10);
  EXPECT_EQ(s.frames(), 10u);
  EXPECT_EQ(s.n_classes(), 13);
  for (double v : s.raw()) EXPECT_EQ(v, 0.0);
}

TEST(Encode, OneEvent) {
  ClipAnnotation a;
  a.add({3, 2, 0, Direction(0, 0)});
  const auto s = encode(a, 5);
  EXPECT_EQ(s.get(3, 2), (Vec3{1, 0, 0}));
  int nonzero = 0;
  for (double v : s.raw()) nonzero += v != 0.0;
  EXPECT_EQ(nonzero, 1);
}

TEST(Encode, CollisionAndOverrunAreErrors) {
  ClipAnnotation a;
  a.add({4, 7, 0, Direction(0, 0)});
  a.add({4, 7, 1, Direction(90, 0)});
  try {
    encode(a, 10);
    FAIL();
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("frame 4"), std::string::npos);
    EXPECT_NE(msg.find("class 7"), std::string::npos);
  }
  ClipAnnotation b;
  b.add({10, 0, 0, Direction(0, 0)});
  EXPECT_THROW(encode(b, 10), Error);
}

TEST(Decode, Examples) {
  AccdoaSequence s(2, 3);
  s.set(0, 0, {0.9, 0, 0});
  s.set(1, 2, {0.3, 0.3, 0.3});
  s.set(1, 1, {0.2, 0.1, 0});
  const auto ev = decode(s, 0.5);
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_EQ(ev[0].frame, 0);
  EXPECT_EQ(ev[0].class_id, 0);
  EXPECT_NEAR(ev[0].activity, 0.9, 1e-15);
  EXPECT_NEAR(ev[0].direction.azimuth(), 0, 1e-12);
  EXPECT_NEAR(ev[0].direction.elevation(), 0, 1e-12);
  EXPECT_EQ(ev[1].frame, 1);
  EXPECT_EQ(ev[1].class_id, 2);
  EXPECT_NEAR(ev[1].activity, std::sqrt(0.27), 1e-12);
  EXPECT_NEAR(ev[1].activity, 0.5196, 1e-4);
  EXPECT_NEAR(ev[1].direction.azimuth(), 45, 1e-12);
  EXPECT_NEAR(ev[1].direction.elevation(), oracle::deg(std::atan(1 / std::sqrt(2.0))), 1e-12);
  EXPECT_NEAR(ev[1].direction.elevation(), 35.264, 1e-3);
}

TEST(Decode, ZeroVectorNeverActive) {
  AccdoaSequence s(4, 2);
  EXPECT_TRUE(decode(s, 1e-9).empty());
}

TEST(Decode, ThresholdIsStrict) {
  AccdoaSequence s(1, 1);
  s.set(0, 0, {0.5, 0, 0});
  EXPECT_TRUE(decode(s, 0.5).empty());
  EXPECT_EQ(decode(s, 0.4999).size(), 1u);
}

ClipAnnotation random_annotation(std::mt19937_64& gen, int frames, int classes) {
  std::uniform_real_distribution<double> az(-180, 180), el(-89, 89);
  ClipAnnotation a(classes);
  for (int f = 0; f < frames; ++f) {
    for (int c = 0; c < classes; ++c) {
      if (gen() % 4 == 0) a.add({f, c, 0, Direction(az(gen), el(gen))});
    }
  }
  return a;
}

TEST(RoundTrip, DecodeEncodeIsIdentity) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = random_annotation(gen, 20, 5);
    for (double tau : {0.05, 0.5, 0.99}) {
      const auto back = events_to_annotation(decode(encode(a, 20), tau), 5);
      ASSERT_EQ(back.events().size(), a.events().size());
      for (std::size_t i = 0; i < a.events().size(); ++i) {
        const auto& x = a.events()[i];
        const auto& y = back.events()[i];
        EXPECT_EQ(x.frame, y.frame);
        EXPECT_EQ(x.class_id, y.class_id);
        EXPECT_EQ(x.track_id, y.track_id);
        EXPECT_LT(angular_distance(x.direction, y.direction), 1e-9);
      }
    }
  }
}

TEST(Decode, MonotoneInThreshold) {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(-1, 1);
  AccdoaSequence s(30, 4);
  for (std::size_t f = 0; f < 30; ++f) {
    for (int c = 0; c < 4; ++c) s.set(f, c, {u(gen), u(gen), u(gen)});
  }
  std::size_t prev = decode(s, 0.01).size();
  for (double tau = 0.05; tau < 1.7; tau += 0.05) {
    const auto n = decode(s, tau).size();
    EXPECT_LE(n, prev);
    prev = n;
  }
}

TEST(EventsToAnnotation, TrackIdsPerClassInOrder) {
  std::vector<DetectedEvent> ev{{2, 1, Direction(0, 0), 1.0}, {2, 1, Direction(90, 0), 0.8},
                                {2, 3, Direction(10, 0), 0.9}, {0, 1, Direction(0, 0), 1.0}};
  const auto a = events_to_annotation(ev, 5);
  ASSERT_EQ(a.events().size(), 4u);
  EXPECT_EQ(a.events()[0].frame, 0);
  EXPECT_EQ(a.events()[1].track_id, 0);
  EXPECT_EQ(a.events()[2].track_id, 1);
  EXPECT_EQ(a.events()[2].direction.azimuth(), 90.0);
  EXPECT_EQ(a.events()[3].class_id, 3);
}

TEST(AccdoaFile, RoundTrip) {
  testing_util::TempDir dir;
  AccdoaSequence s(3, 2);
  s.set(1, 1, {0.25, -0.5, 0.75});
  write_accdoa(dir / "p.acc", s);
  EXPECT_EQ(read_accdoa(dir / "p.acc"), s);
}

// Oracle predictor contract.

FeatureTensor blank_features(std::size_t stft_frames) { return FeatureTensor(7, stft_frames, 4); }

TEST(Oracle, ZeroJitterIsEncode) {
  std::mt19937_64 gen(1);
  const auto a = random_annotation(gen, 12, 13);
  OraclePredictor p;
  p.add_clip("c", a);
  const auto features = blank_features(49);
  EXPECT_EQ(label_frames_for(features), 12u);
  EXPECT_EQ(p.predict(features, {"c", 0}), encode(a, 12));
}

TEST(Oracle, RotationAware) {
  std::mt19937_64 gen(2);
  const auto a = random_annotation(gen, 8, 13);
  OraclePredictor p;
  p.add_clip("c", a);
  const auto features = blank_features(32);
  for (const auto& pat : all_patterns()) {
    const auto got = p.predict(features, {"c", pat.id});
    const auto want = encode(apply_to_annotation(a, pat), 8);
    for (std::size_t f = 0; f < 8; ++f) {
      for (int c = 0; c < 13; ++c) {
        const auto g = got.get(f, c), w = want.get(f, c);
        EXPECT_NEAR(g.x, w.x, 1e-12);
        EXPECT_NEAR(g.y, w.y, 1e-12);
        EXPECT_NEAR(g.z, w.z, 1e-12);
      }
    }
  }
}

TEST(Oracle, JitterBoundedAndSeeded) {
  std::mt19937_64 gen(3);
  const auto a = random_annotation(gen, 40, 13);
  OraclePredictorConfig cfg;
  cfg.jitter_deg = 5;
  cfg.activity = 0.8;
  cfg.seed = 11;
  OraclePredictor p(cfg), same(cfg);
  p.add_clip("c", a);
  same.add_clip("c", a);
  const auto features = blank_features(160);
  const auto got = p.predict(features, {"c", 0});
  EXPECT_EQ(got, same.predict(features, {"c", 0}));
  double max_err = 0;
  for (const auto& e : a.events()) {
    const auto v = got.get(static_cast<std::size_t>(e.frame), e.class_id);
    EXPECT_NEAR(norm(v), 0.8, 1e-12);
    const double err = angular_distance(v, dir_to_unit(e.direction).vec());
    EXPECT_LE(err, 5.0 + 1e-9);
    max_err = std::max(max_err, err);
  }
  EXPECT_GT(max_err, 1.0);
  for (double v : got.raw()) EXPECT_LE(std::abs(v), 1.0);
}

TEST(Oracle, Errors) {
  OraclePredictor p;
  EXPECT_THROW(p.predict(blank_features(8), {"missing", 0}), Error);
  ClipAnnotation a;
  a.add({5, 0, 0, Direction(0, 0)});
  p.add_clip("c", a);
  EXPECT_THROW(p.predict(blank_features(8), {"c", 0}), Error);
  OraclePredictorConfig bad;
  bad.jitter_deg = 90;
  EXPECT_THROW(OraclePredictor{bad}, Error);
  bad = {};
  bad.activity = 0;
  EXPECT_THROW(OraclePredictor{bad}, Error);
}

TEST(ConstantPredictor, FillsEveryCell) {
  const ConstantPredictor p(3, {0, 0.7, 0});
  const auto s = p.predict(blank_features(20), {"x", 4});
  EXPECT_EQ(s.frames(), 5u);
  for (std::size_t f = 0; f < 5; ++f) {
    for (int c = 0; c < 3; ++c) EXPECT_EQ(s.get(f, c), (Vec3{0, 0.7, 0}));
  }
  EXPECT_TRUE(decode(ConstantPredictor().predict(blank_features(20), {"x", 0})).empty());
}

TEST(ExternalFilePredictor, ReadsPerPatternFiles) {
  testing_util::TempDir dir;
  AccdoaSequence s0(5, 13), s3(5, 13);
  s0.set(1, 1, {1, 0, 0});
  s3.set(2, 2, {0, 1, 0});
  write_accdoa(dir / "clip.acc", s0);
  write_accdoa(dir / "clip.r3.acc", s3);
  const ExternalFilePredictor p(dir.path());
  EXPECT_EQ(p.predict(blank_features(20), {"clip", 0}), s0);
  EXPECT_EQ(p.predict(blank_features(20), {"clip", 3}), s3);
  EXPECT_THROW(p.predict(blank_features(20), {"clip", 4}), Error);
  EXPECT_THROW(p.predict(blank_features(40), {"clip", 0}), Error);
}

TEST(Seeds, MixAndHashAreStable) {
  EXPECT_EQ(mix_seed(1, 2), mix_seed(1, 2));
  EXPECT_NE(mix_seed(1, 2), mix_seed(2, 1));
  EXPECT_EQ(hash_string("abc"), hash_string("abc"));
  EXPECT_NE(hash_string("abc"), hash_string("abd"));
  // FNV-1a reference value.
  EXPECT_EQ(hash_string("a"), 0xaf63dc4c8601ec8cULL);
}

}  // namespace
}  // namespace seld
