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

#ifndef SELD_PREDICTOR_H_
#define SELD_PREDICTOR_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "seld/accdoa.h"
#include "seld/features.h"
#include "seld/labels.h"

namespace seld {

// Which clip a feature tensor came from and which rotation pattern was
// applied to the audio before feature extraction.
struct ClipIdentity {
  std::string clip_id;
  int pattern_id = 0;
};

// Maps a [7 x T x M] feature tensor to an ACCDOA sequence of floor(T / 4)
// label frames with values in [-1, 1].
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual AccdoaSequence predict(const FeatureTensor& features, const ClipIdentity& clip) const = 0;
  virtual std::string name() const = 0;
};

std::size_t label_frames_for(const FeatureTensor& features);

struct OraclePredictorConfig {
  double jitter_deg = 0.0;
  double activity = 1.0;
  std::uint64_t seed = 0;
  int n_classes = kDefaultNumClasses;

  void validate() const;
};

// Test double that answers from ground truth. It is rotation-aware: for a
// clip rotated by pattern p it returns the labels rotated by p. With jitter,
// each active vector is tilted by a random angle in [0, jitter_deg] about a
// random perpendicular axis, seeded per (seed, clip, pattern, frame, class).
class OraclePredictor : public Predictor {
 public:
  explicit OraclePredictor(OraclePredictorConfig config = {});

  void add_clip(const std::string& clip_id, ClipAnnotation annotation);

  AccdoaSequence predict(const FeatureTensor& features, const ClipIdentity& clip) const override;
  std::string name() const override { return "oracle"; }

 private:
  OraclePredictorConfig config_;
  std::map<std::string, ClipAnnotation> annotations_;
};

// Emits the same vector in every (frame, class) cell; zero by default.
class ConstantPredictor : public Predictor {
 public:
  explicit ConstantPredictor(int n_classes = kDefaultNumClasses, Vec3 value = {});

  AccdoaSequence predict(const FeatureTensor& features, const ClipIdentity& clip) const override;
  std::string name() const override { return "constant"; }

 private:
  int n_classes_;
  Vec3 value_;
};

// Reads precomputed sequences from `<dir>/<clip_id>.r<pattern>.acc`; for
// pattern 0 `<dir>/<clip_id>.acc` is accepted too. The stored frame count must
// match the feature tensor.
class ExternalFilePredictor : public Predictor {
 public:
  explicit ExternalFilePredictor(std::filesystem::path dir);

  AccdoaSequence predict(const FeatureTensor& features, const ClipIdentity& clip) const override;
  std::string name() const override { return "external-file:" + dir_.string(); }

  std::filesystem::path path_for(const ClipIdentity& clip) const;

 private:
  std::filesystem::path dir_;
};

// Deterministic 64-bit mixing used to derive per-entry seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t value);
std::uint64_t hash_string(const std::string& s);

}  // namespace seld

#endif  // SELD_PREDICTOR_H_
