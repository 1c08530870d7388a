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

#ifndef SELD_PIPELINE_H_
#define SELD_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "seld/augment.h"
#include "seld/audio.h"
#include "seld/features.h"
#include "seld/labels.h"
#include "seld/metrics.h"
#include "seld/predictor.h"
#include "seld/tta.h"

namespace seld {

// Windows of window_s seconds every hop_s seconds; count is
// 1 + floor((N - window) / hop) for clips at least one window long. Shorter
// clips yield one zero-padded window.
std::vector<AudioClip> segment_clip(const AudioClip& clip, double window_s = 5.0, double hop_s = 1.0);

enum class SplitMode { kStratified, kByRoom };

// Partitions the manifest into k folds. Stratified mode deals each class
// (entries without class_id form their own stratum) round-robin across folds
// after a seeded shuffle. Room mode keeps every room_tag inside one fold and
// assigns rooms largest-first to the currently smallest fold. Entries get
// fold_tag "fold<i>".
std::vector<DatasetManifest> kfold_split(const DatasetManifest& manifest, int k, SplitMode mode,
                                         std::uint64_t seed);

struct PredictorSpec {
  std::string type = "oracle";  // oracle | constant | external-file
  double jitter_deg = 0.0;
  double activity = 1.0;
  std::uint64_t seed = 0;
  Vec3 constant;
  std::vector<std::string> dirs;

  static PredictorSpec from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  nlohmann::json to_json() const;
};

struct RunConfig {
  std::filesystem::path manifest;
  std::filesystem::path output;
  std::uint64_t seed = 0;
  int workers = 1;
  FeatureConfig features;
  bool augment_enabled = false;
  AugmentConfig augment;
  bool tta_enabled = true;
  TtaConfig tta;
  MetricConfig metrics;
  PredictorSpec predictor;

  // Relative paths resolve against base_dir. SELD_WORKERS overrides workers.
  static RunConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  static RunConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

// Predictors for one clip; more than one means ensembling.
std::vector<std::unique_ptr<Predictor>> make_predictors(const PredictorSpec& spec,
                                                        const std::string& clip_id,
                                                        const ClipAnnotation& annotation,
                                                        std::uint64_t run_seed);

// Events for one clip: features plus direct decoding, or TTA when enabled.
std::vector<DetectedEvent> predict_clip(const std::vector<std::unique_ptr<Predictor>>& predictors,
                                        const AudioClip& clip, const std::string& clip_id,
                                        const RunConfig& config);

struct EntryFailure {
  std::string clip;
  std::string error;
};

struct PipelineResult {
  std::optional<SeldScores> scores;
  std::vector<ClassStats> stats;
  std::size_t n_entries = 0;
  std::size_t n_evaluated = 0;
  std::vector<EntryFailure> failures;
  std::string error;

  nlohmann::json to_json() const;
};

PipelineResult run_pipeline(const RunConfig& config);
// Runs and writes the scores JSON to config.output.
PipelineResult run_pipeline_to_file(const RunConfig& config);

}  // namespace seld

#endif  // SELD_PIPELINE_H_
