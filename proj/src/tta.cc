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

#include "seld/tta.h"

#include <algorithm>
#include <deque>
#include <set>

#include "seld/error.h"
#include "seld/rotation.h"

namespace seld {

namespace {

constexpr int kUnvisited = -2;

void check_aggregation_params(const TtaConfig& c) {
  if (!(c.unify_deg > 0.0 && c.unify_deg < 180.0)) throw Error("unify_deg must be in (0, 180)");
  if (c.min_candidates < 1) throw Error("min_candidates must be at least 1");
  if (c.min_pts < 1) throw Error("min_pts must be at least 1");
  if (c.max_tracks < 1) throw Error("max_tracks must be at least 1");
}

std::vector<std::size_t> neighbors(std::span<const Vec3> points, std::size_t i, double eps_deg) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (angular_distance(points[i], points[j]) <= eps_deg) out.push_back(j);
  }
  return out;
}

}  // namespace

void TtaConfig::validate() const {
  check_aggregation_params(*this);
  if (min_candidates > kNumPatterns) throw Error("min_candidates must be at most 16");
  if (!(activity_threshold > 0.0)) throw Error("activity_threshold must be positive");
}

nlohmann::json TtaConfig::to_json() const {
  return {{"unify_deg", unify_deg},   {"min_candidates", min_candidates},
          {"min_pts", min_pts},       {"max_tracks", max_tracks},
          {"activity_threshold", activity_threshold}};
}

TtaConfig TtaConfig::from_json(const nlohmann::json& j) {
  TtaConfig c;
  c.unify_deg = j.value("unify_deg", c.unify_deg);
  c.min_candidates = j.value("min_candidates", c.min_candidates);
  c.min_pts = j.value("min_pts", c.min_pts);
  c.max_tracks = j.value("max_tracks", c.max_tracks);
  c.activity_threshold = j.value("activity_threshold", c.activity_threshold);
  c.validate();
  return c;
}

void CandidateSet::add(int frame, int class_id, const Candidate& candidate) {
  if (frame < 0 || static_cast<std::size_t>(frame) >= frames_ || class_id < 0 ||
      class_id >= n_classes_) {
    throw Error("candidate cell out of range");
  }
  cells_[{frame, class_id}].push_back(candidate);
}

void CandidateSet::merge(const CandidateSet& other) {
  if (empty() && frames_ == 0 && n_classes_ == 0) {
    frames_ = other.frames_;
    n_classes_ = other.n_classes_;
  }
  if (other.frames_ != frames_ || other.n_classes_ != n_classes_) {
    throw Error("cannot merge candidate sets of different dims");
  }
  for (const auto& [cell, list] : other.cells_) {
    auto& dst = cells_[cell];
    dst.insert(dst.end(), list.begin(), list.end());
  }
}

std::size_t CandidateSet::total() const {
  std::size_t n = 0;
  for (const auto& [cell, list] : cells_) n += list.size();
  return n;
}

CandidateSet collect_candidates(std::span<const PatternPrediction> predictions, double threshold,
                                int source) {
  if (predictions.empty()) return {};
  const std::size_t frames = predictions.front().sequence.frames();
  const int n_classes = predictions.front().sequence.n_classes();
  std::set<int> seen;
  for (const auto& pred : predictions) {
    if (!seen.insert(pred.pattern_id).second) {
      throw Error("duplicate prediction for rotation pattern " + std::to_string(pred.pattern_id));
    }
    if (pred.sequence.frames() != frames || pred.sequence.n_classes() != n_classes) {
      throw Error("prediction for pattern " + std::to_string(pred.pattern_id) +
                  " has mismatched dims");
    }
  }
  CandidateSet set(frames, n_classes);
  for (std::size_t t = 0; t < frames; ++t) {
    for (int c = 0; c < n_classes; ++c) {
      for (const auto& pred : predictions) {
        const Vec3 v = pred.sequence.get(t, c);
        if (!(norm(v) > threshold)) continue;
        const RotationPattern back = inverse(pattern(pred.pattern_id));
        set.add(static_cast<int>(t), c, {apply_to_vector(v, back), pred.pattern_id, source});
      }
    }
  }
  return set;
}

std::vector<int> dbscan_sphere(std::span<const Vec3> points, double eps_deg, int min_pts) {
  if (!(eps_deg > 0.0)) throw Error("DBSCAN eps must be positive");
  std::vector<Vec3> unit;
  unit.reserve(points.size());
  for (const auto& p : points) unit.push_back(UnitVec3(p).vec());

  std::vector<int> labels(points.size(), kUnvisited);
  int next_cluster = 0;
  for (std::size_t i = 0; i < unit.size(); ++i) {
    if (labels[i] != kUnvisited) continue;
    const auto seeds = neighbors(unit, i, eps_deg);
    if (seeds.size() < static_cast<std::size_t>(min_pts)) {
      labels[i] = kNoise;
      continue;
    }
    const int cluster = next_cluster++;
    labels[i] = cluster;
    std::deque<std::size_t> queue(seeds.begin(), seeds.end());
    while (!queue.empty()) {
      const std::size_t q = queue.front();
      queue.pop_front();
      if (labels[q] == kNoise) labels[q] = cluster;  // border point
      if (labels[q] != kUnvisited) continue;
      labels[q] = cluster;
      const auto reach = neighbors(unit, q, eps_deg);
      if (reach.size() >= static_cast<std::size_t>(min_pts)) {
        queue.insert(queue.end(), reach.begin(), reach.end());
      }
    }
  }
  return labels;
}

std::vector<Cluster> cluster_cell(std::span<const Candidate> candidates, const TtaConfig& config) {
  std::vector<Vec3> points;
  points.reserve(candidates.size());
  for (const auto& c : candidates) points.push_back(c.vector);
  const auto labels = dbscan_sphere(points, config.unify_deg, config.min_pts);
  const int n_clusters = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;

  std::vector<Cluster> clusters(static_cast<std::size_t>(std::max(n_clusters, 0)));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= 0) clusters[static_cast<std::size_t>(labels[i])].members.push_back(i);
  }
  std::vector<Cluster> kept;
  for (auto& cl : clusters) {
    if (cl.members.size() < static_cast<std::size_t>(config.min_pts)) continue;
    Vec3 sum;
    for (const std::size_t i : cl.members) sum += candidates[i].vector;
    cl.mean = sum / static_cast<double>(cl.members.size());
    cl.weight = static_cast<double>(cl.members.size()) * norm(cl.mean);
    if (cl.weight > 0.0) kept.push_back(std::move(cl));
  }
  return kept;
}

std::vector<DetectedEvent> aggregate(const CandidateSet& candidates, const TtaConfig& config) {
  check_aggregation_params(config);
  struct Ranked {
    DetectedEvent event;
    double weight;
    std::size_t order;
  };
  std::map<int, std::vector<Ranked>> by_frame;
  std::size_t order = 0;
  for (const auto& [cell, list] : candidates.cells()) {
    if (list.size() < static_cast<std::size_t>(config.min_candidates)) continue;
    for (const auto& cl : cluster_cell(list, config)) {
      DetectedEvent e{cell.first, cell.second, unit_to_dir(cl.mean), norm(cl.mean)};
      by_frame[cell.first].push_back({e, cl.weight, order++});
    }
  }
  std::vector<DetectedEvent> out;
  for (auto& [frame, ranked] : by_frame) {
    if (ranked.size() > static_cast<std::size_t>(config.max_tracks)) {
      std::stable_sort(ranked.begin(), ranked.end(),
                       [](const Ranked& a, const Ranked& b) { return a.weight > b.weight; });
      ranked.resize(static_cast<std::size_t>(config.max_tracks));
      std::sort(ranked.begin(), ranked.end(),
                [](const Ranked& a, const Ranked& b) { return a.order < b.order; });
    }
    for (const auto& r : ranked) out.push_back(r.event);
  }
  return out;
}

namespace {

CandidateSet predict_all_rotations(const Predictor& predictor, const AudioClip& clip,
                                   const std::string& clip_id, const FeatureConfig& features,
                                   double threshold, int source) {
  std::vector<PatternPrediction> predictions;
  for (const auto& p : all_patterns()) {
    try {
      const auto feats = extract_features(apply_to_audio(clip, p), features);
      predictions.push_back({p.id, predictor.predict(feats, {clip_id, p.id})});
    } catch (const Error& e) {
      throw Error(predictor.name() + " failed on '" + clip_id + "' under rotation pattern " +
                  std::to_string(p.id) + ": " + e.what());
    }
  }
  return collect_candidates(predictions, threshold, source);
}

}  // namespace

std::vector<DetectedEvent> run_tta(const Predictor& predictor, const AudioClip& clip,
                                   const std::string& clip_id, const FeatureConfig& features,
                                   const TtaConfig& config) {
  config.validate();
  return aggregate(
      predict_all_rotations(predictor, clip, clip_id, features, config.activity_threshold, 0),
      config);
}

std::vector<DetectedEvent> run_tta_ensemble(std::span<const Predictor* const> predictors,
                                            const AudioClip& clip, const std::string& clip_id,
                                            const FeatureConfig& features, const TtaConfig& config) {
  config.validate();
  if (predictors.empty()) throw Error("ensemble needs at least one predictor");
  CandidateSet pooled;
  for (std::size_t i = 0; i < predictors.size(); ++i) {
    pooled.merge(predict_all_rotations(*predictors[i], clip, clip_id, features,
                                       config.activity_threshold, static_cast<int>(i)));
  }
  TtaConfig scaled = config;
  scaled.min_candidates = config.min_candidates * static_cast<int>(predictors.size());
  return aggregate(pooled, scaled);
}

}  // namespace seld
