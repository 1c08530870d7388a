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

#include "seld/predictor.h"

#include <cmath>
#include <random>
#include <utility>

#include "seld/error.h"
#include "seld/rng.h"
#include "seld/rotation.h"

namespace seld {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t value) {
  // splitmix64 finalizer over a combination of both inputs.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (value + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t hash_string(const std::string& s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
  for (const unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::size_t label_frames_for(const FeatureTensor& features) {
  return features.frames / kStftFramesPerLabelFrame;
}

void OraclePredictorConfig::validate() const {
  if (!(jitter_deg >= 0.0 && jitter_deg < 90.0)) throw Error("oracle jitter must be in [0, 90)");
  if (!(activity > 0.0 && activity <= 1.0)) throw Error("oracle activity must be in (0, 1]");
  if (n_classes <= 0) throw Error("n_classes must be positive");
}

OraclePredictor::OraclePredictor(OraclePredictorConfig config) : config_(config) {
  config_.validate();
}

void OraclePredictor::add_clip(const std::string& clip_id, ClipAnnotation annotation) {
  if (annotation.n_classes() != config_.n_classes) {
    throw Error("annotation for '" + clip_id + "' has " + std::to_string(annotation.n_classes()) +
                " classes, oracle expects " + std::to_string(config_.n_classes));
  }
  annotations_.insert_or_assign(clip_id, std::move(annotation));
}

AccdoaSequence OraclePredictor::predict(const FeatureTensor& features,
                                        const ClipIdentity& clip) const {
  const auto it = annotations_.find(clip.clip_id);
  if (it == annotations_.end()) throw Error("oracle has no annotation for clip '" + clip.clip_id + "'");
  const RotationPattern& p = pattern(clip.pattern_id);
  const std::size_t frames = label_frames_for(features);
  if (static_cast<std::size_t>(it->second.frame_extent()) > frames) {
    throw Error("annotation of '" + clip.clip_id + "' extends past the clip's " +
                std::to_string(frames) + " label frames");
  }
  AccdoaSequence seq = encode(it->second, frames);
  const std::uint64_t clip_seed =
      mix_seed(mix_seed(config_.seed, hash_string(clip.clip_id)), static_cast<std::uint64_t>(clip.pattern_id));
  for (std::size_t t = 0; t < frames; ++t) {
    for (int c = 0; c < seq.n_classes(); ++c) {
      Vec3 v = seq.get(t, c);
      if (v == Vec3{}) continue;
      v = apply_to_vector(v, p);
      if (config_.jitter_deg > 0.0) {
        Rng rng(mix_seed(clip_seed, t * static_cast<std::size_t>(seq.n_classes()) + c));
        std::normal_distribution<double> gauss;
        Vec3 axis;
        do {
          const Vec3 r{gauss(rng), gauss(rng), gauss(rng)};
          axis = r - v * dot(r, v);
        } while (norm(axis) < 1e-6);
        axis = axis / norm(axis);
        const double angle =
            std::uniform_real_distribution<double>(0.0, config_.jitter_deg)(rng) * kDegToRad;
        v = v * std::cos(angle) + cross(axis, v) * std::sin(angle);
      }
      seq.set(t, c, v * config_.activity);
    }
  }
  return seq;
}

ConstantPredictor::ConstantPredictor(int n_classes, Vec3 value) : n_classes_(n_classes), value_(value) {
  if (n_classes <= 0) throw Error("n_classes must be positive");
}

AccdoaSequence ConstantPredictor::predict(const FeatureTensor& features, const ClipIdentity&) const {
  AccdoaSequence seq(label_frames_for(features), n_classes_);
  for (std::size_t t = 0; t < seq.frames(); ++t) {
    for (int c = 0; c < n_classes_; ++c) seq.set(t, c, value_);
  }
  return seq;
}

ExternalFilePredictor::ExternalFilePredictor(std::filesystem::path dir) : dir_(std::move(dir)) {
  if (!std::filesystem::is_directory(dir_)) {
    throw Error("prediction directory not found: " + dir_.string());
  }
}

std::filesystem::path ExternalFilePredictor::path_for(const ClipIdentity& clip) const {
  const auto rotated = dir_ / (clip.clip_id + ".r" + std::to_string(clip.pattern_id) + ".acc");
  if (clip.pattern_id == 0 && !std::filesystem::exists(rotated)) return dir_ / (clip.clip_id + ".acc");
  return rotated;
}

AccdoaSequence ExternalFilePredictor::predict(const FeatureTensor& features,
                                              const ClipIdentity& clip) const {
  AccdoaSequence seq = read_accdoa(path_for(clip));
  if (seq.frames() != label_frames_for(features)) {
    throw Error(path_for(clip).string() + ": " + std::to_string(seq.frames()) +
                " frames stored, clip has " + std::to_string(label_frames_for(features)));
  }
  return seq;
}

}  // namespace seld
