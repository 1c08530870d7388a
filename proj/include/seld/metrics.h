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

// Location-dependent SELD scores.
//
// Predictions and references of one (frame, class) cell are paired by a
// minimum-total-angle assignment. A pair within the spatial threshold is a
// true positive; a pair beyond it counts as one false positive and one false
// negative. Unpaired predictions are false positives, unpaired references
// false negatives. Every pair contributes to the localization error and to
// the class-level recall regardless of its angle.
//
// Error rate uses segments of `segment_frames` label frames: per segment and
// class, S = min(FP, FN), D = max(0, FN - FP), I = max(0, FP - FN), and
// ER_c = sum(S + D + I) / sum(N_ref). F, LE and LR use frame-level totals.
// All four scores are macro-averaged over classes that have references.

#ifndef SELD_METRICS_H_
#define SELD_METRICS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "json.hpp"
#include "seld/accdoa.h"
#include "seld/geometry.h"
#include "seld/labels.h"

namespace seld {

struct MetricConfig {
  double spatial_threshold = 20.0;
  int segment_frames = 10;
  int n_classes = kDefaultNumClasses;

  void validate() const;
  nlohmann::json to_json() const;
  static MetricConfig from_json(const nlohmann::json& j);
};

struct FrameMatching {
  int frame = 0;
  int class_id = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (pred, ref)
  std::vector<double> distances;                           // per pair, degrees
  std::vector<std::size_t> unmatched_preds;
  std::vector<std::size_t> unmatched_refs;
  std::size_t n_refs = 0;
};

FrameMatching match_frame(std::span<const Direction> preds, std::span<const Direction> refs,
                          int frame = 0, int class_id = 0);

struct SegmentCounts {
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t n_ref = 0;
};

struct ClassStats {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  double loc_error_sum = 0.0;
  std::int64_t loc_match_count = 0;
  std::int64_t ref_count = 0;
  std::int64_t det_recall_count = 0;

  // Closed segment totals.
  std::int64_t substitutions = 0;
  std::int64_t deletions = 0;
  std::int64_t insertions = 0;
  std::int64_t segment_refs = 0;
  // Segments still being filled, keyed by segment index.
  std::map<int, SegmentCounts> open_segments;

  // Folds open segments into the S/D/I totals.
  void close_segments();
  // Sums closed totals; both sides must have no open segments.
  void merge(const ClassStats& other);
};

// One frame/class matching into stats[matching.class_id].
void accumulate(std::vector<ClassStats>& stats, const FrameMatching& matching,
                const MetricConfig& config);

struct ClassScores {
  int class_id = 0;
  bool has_refs = false;
  double er = 0.0;
  double f = 0.0;
  std::optional<double> le;
  double lr = 0.0;
};

struct SeldScores {
  double er20 = 0.0;
  double f20 = 0.0;
  double le_cd = 0.0;
  double lr_cd = 0.0;
  std::vector<ClassScores> per_class;
};

// Throws "undefined metrics" when no class has a reference event.
SeldScores finalize(std::vector<ClassStats> stats, const MetricConfig& config);

// Matches and accumulates one clip; returned stats have their segments closed.
std::vector<ClassStats> evaluate_clip(std::span<const DetectedEvent> predictions,
                                      const ClipAnnotation& reference, const MetricConfig& config);
SeldScores evaluate(std::span<const DetectedEvent> predictions, const ClipAnnotation& reference,
                    const MetricConfig& config);

std::vector<DetectedEvent> annotation_to_events(const ClipAnnotation& annotation);

nlohmann::json scores_to_json(const SeldScores& scores, std::span<const ClassStats> stats);

}  // namespace seld

#endif  // SELD_METRICS_H_
