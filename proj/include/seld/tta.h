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

// Clustering-based test-time augmentation.
//
// The predictor runs once per rotation pattern. Every active ACCDOA vector is
// mapped back through the inverse pattern, giving up to 16 candidates per
// (label frame, class) cell. Cells with enough candidates are clustered on the
// sphere with DBSCAN; each cluster becomes one event whose vector is the mean
// of its members. Noise candidates are discarded, so outlier rotations do not
// pull the estimate, and same-class sources at different positions come out
// as separate events. Per frame at most max_tracks events survive, ranked by
// member count times the norm of the mean vector.

#ifndef SELD_TTA_H_
#define SELD_TTA_H_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "seld/accdoa.h"
#include "seld/audio.h"
#include "seld/features.h"
#include "seld/geometry.h"
#include "seld/predictor.h"

namespace seld {

struct TtaConfig {
  double unify_deg = 15.0;
  int min_candidates = 8;
  int min_pts = 2;
  int max_tracks = 3;
  double activity_threshold = kDefaultActivityThreshold;

  void validate() const;
  nlohmann::json to_json() const;
  static TtaConfig from_json(const nlohmann::json& j);
};

struct Candidate {
  Vec3 vector;  // activity-scaled, de-rotated
  int pattern_id = 0;
  int source = 0;  // prediction set index when several models are merged
};

class CandidateSet {
 public:
  using Cell = std::pair<int, int>;  // (frame, class)

  CandidateSet() = default;
  CandidateSet(std::size_t frames, int n_classes) : frames_(frames), n_classes_(n_classes) {}

  void add(int frame, int class_id, const Candidate& candidate);
  // Appends another set's candidates (model ensembling). Dims must agree.
  void merge(const CandidateSet& other);

  const std::map<Cell, std::vector<Candidate>>& cells() const { return cells_; }
  std::size_t frames() const { return frames_; }
  int n_classes() const { return n_classes_; }
  bool empty() const { return cells_.empty(); }
  std::size_t total() const;

 private:
  std::size_t frames_ = 0;
  int n_classes_ = 0;
  std::map<Cell, std::vector<Candidate>> cells_;
};

struct PatternPrediction {
  int pattern_id = 0;
  AccdoaSequence sequence;
};

// Throws on duplicate pattern ids or mismatched dims.
CandidateSet collect_candidates(std::span<const PatternPrediction> predictions, double threshold,
                                int source = 0);

inline constexpr int kNoise = -1;

// DBSCAN over unit vectors with great-circle distance in degrees. A point's
// neighborhood includes itself and every point within eps_deg. Clusters are
// numbered from 0 in order of their first core point by index; a border point
// reachable from several clusters joins the lowest-numbered one.
std::vector<int> dbscan_sphere(std::span<const Vec3> points, double eps_deg, int min_pts);

struct Cluster {
  std::vector<std::size_t> members;
  Vec3 mean;
  double weight = 0.0;  // members.size() * norm(mean)
};

// Clusters of one cell, noise dropped, clusters smaller than min_pts dropped.
std::vector<Cluster> cluster_cell(std::span<const Candidate> candidates, const TtaConfig& config);

// Events ordered by (frame, class, cluster number).
std::vector<DetectedEvent> aggregate(const CandidateSet& candidates, const TtaConfig& config);

// Runs `predictor` on every rotation of `clip`, de-rotates and aggregates.
std::vector<DetectedEvent> run_tta(const Predictor& predictor, const AudioClip& clip,
                                   const std::string& clip_id, const FeatureConfig& features,
                                   const TtaConfig& config);

// As run_tta over several predictors whose candidates are pooled before
// clustering; min_candidates scales with the number of predictors.
std::vector<DetectedEvent> run_tta_ensemble(std::span<const Predictor* const> predictors,
                                            const AudioClip& clip, const std::string& clip_id,
                                            const FeatureConfig& features, const TtaConfig& config);

}  // namespace seld

#endif  // SELD_TTA_H_
