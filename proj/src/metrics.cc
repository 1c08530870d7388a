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

#include "seld/metrics.h"

#include <algorithm>
#include <string>

#include "seld/error.h"
#include "seld/hungarian.h"

namespace seld {

void MetricConfig::validate() const {
  if (!(spatial_threshold > 0.0 && spatial_threshold < 180.0)) {
    throw Error("spatial_threshold must be in (0, 180)");
  }
  if (segment_frames < 1) throw Error("segment_frames must be at least 1");
  if (n_classes < 1) throw Error("n_classes must be positive");
}

nlohmann::json MetricConfig::to_json() const {
  return {{"spatial_threshold", spatial_threshold},
          {"segment_frames", segment_frames},
          {"n_classes", n_classes},
          {"averaging", "macro"}};
}

MetricConfig MetricConfig::from_json(const nlohmann::json& j) {
  MetricConfig c;
  c.spatial_threshold = j.value("spatial_threshold", c.spatial_threshold);
  c.segment_frames = j.value("segment_frames", c.segment_frames);
  c.n_classes = j.value("n_classes", c.n_classes);
  if (j.value("averaging", std::string("macro")) != "macro") {
    throw Error("only macro averaging is supported");
  }
  c.validate();
  return c;
}

FrameMatching match_frame(std::span<const Direction> preds, std::span<const Direction> refs,
                          int frame, int class_id) {
  FrameMatching m;
  m.frame = frame;
  m.class_id = class_id;
  m.n_refs = refs.size();
  std::vector<std::vector<double>> cost(preds.size(), std::vector<double>(refs.size()));
  for (std::size_t i = 0; i < preds.size(); ++i) {
    for (std::size_t j = 0; j < refs.size(); ++j) cost[i][j] = angular_distance(preds[i], refs[j]);
  }
  const auto assignment = solve_assignment(cost);
  std::vector<bool> ref_used(refs.size(), false);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const int j = assignment.empty() ? -1 : assignment[i];
    if (j < 0) {
      m.unmatched_preds.push_back(i);
      continue;
    }
    m.pairs.emplace_back(i, static_cast<std::size_t>(j));
    m.distances.push_back(cost[i][static_cast<std::size_t>(j)]);
    ref_used[static_cast<std::size_t>(j)] = true;
  }
  for (std::size_t j = 0; j < refs.size(); ++j) {
    if (!ref_used[j]) m.unmatched_refs.push_back(j);
  }
  return m;
}

void ClassStats::close_segments() {
  for (const auto& [segment, c] : open_segments) {
    substitutions += std::min(c.fp, c.fn);
    deletions += std::max<std::int64_t>(0, c.fn - c.fp);
    insertions += std::max<std::int64_t>(0, c.fp - c.fn);
    segment_refs += c.n_ref;
  }
  open_segments.clear();
}

void ClassStats::merge(const ClassStats& other) {
  if (!open_segments.empty() || !other.open_segments.empty()) {
    throw Error("close segments before merging class statistics");
  }
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  loc_error_sum += other.loc_error_sum;
  loc_match_count += other.loc_match_count;
  ref_count += other.ref_count;
  det_recall_count += other.det_recall_count;
  substitutions += other.substitutions;
  deletions += other.deletions;
  insertions += other.insertions;
  segment_refs += other.segment_refs;
}

void accumulate(std::vector<ClassStats>& stats, const FrameMatching& matching,
                const MetricConfig& config) {
  if (matching.class_id < 0 || static_cast<std::size_t>(matching.class_id) >= stats.size()) {
    throw Error("class id " + std::to_string(matching.class_id) + " outside statistics table");
  }
  ClassStats& s = stats[static_cast<std::size_t>(matching.class_id)];
  std::int64_t fp = static_cast<std::int64_t>(matching.unmatched_preds.size());
  std::int64_t fn = static_cast<std::int64_t>(matching.unmatched_refs.size());
  for (const double d : matching.distances) {
    if (d <= config.spatial_threshold) {
      ++s.tp;
    } else {
      ++fp;
      ++fn;
    }
    s.loc_error_sum += d;
    ++s.loc_match_count;
    ++s.det_recall_count;
  }
  s.fp += fp;
  s.fn += fn;
  s.ref_count += static_cast<std::int64_t>(matching.n_refs);
  auto& seg = s.open_segments[matching.frame / config.segment_frames];
  seg.fp += fp;
  seg.fn += fn;
  seg.n_ref += static_cast<std::int64_t>(matching.n_refs);
}

SeldScores finalize(std::vector<ClassStats> stats, const MetricConfig& config) {
  config.validate();
  SeldScores scores;
  double er_sum = 0.0, f_sum = 0.0, lr_sum = 0.0, le_sum = 0.0;
  int n_ref_classes = 0, n_le_classes = 0;
  for (std::size_t c = 0; c < stats.size(); ++c) {
    ClassStats& s = stats[c];
    s.close_segments();
    ClassScores cs;
    cs.class_id = static_cast<int>(c);
    cs.has_refs = s.ref_count > 0;
    if (cs.has_refs) {
      cs.er = static_cast<double>(s.substitutions + s.deletions + s.insertions) /
              static_cast<double>(s.segment_refs);
      cs.f = 2.0 * s.tp / static_cast<double>(2 * s.tp + s.fp + s.fn);
      cs.lr = static_cast<double>(s.det_recall_count) / static_cast<double>(s.ref_count);
      if (s.loc_match_count > 0) {
        cs.le = s.loc_error_sum / static_cast<double>(s.loc_match_count);
        le_sum += *cs.le;
        ++n_le_classes;
      }
      er_sum += cs.er;
      f_sum += cs.f;
      lr_sum += cs.lr;
      ++n_ref_classes;
    }
    scores.per_class.push_back(cs);
  }
  if (n_ref_classes == 0) throw Error("undefined metrics: no reference events");
  scores.er20 = er_sum / n_ref_classes;
  scores.f20 = f_sum / n_ref_classes;
  scores.lr_cd = lr_sum / n_ref_classes;
  scores.le_cd = n_le_classes > 0 ? le_sum / n_le_classes : 180.0;
  return scores;
}

std::vector<ClassStats> evaluate_clip(std::span<const DetectedEvent> predictions,
                                      const ClipAnnotation& reference, const MetricConfig& config) {
  config.validate();
  if (reference.n_classes() != config.n_classes) {
    throw Error("reference has " + std::to_string(reference.n_classes()) +
                " classes, metric config expects " + std::to_string(config.n_classes));
  }
  using Cell = std::pair<int, int>;
  std::map<Cell, std::pair<std::vector<Direction>, std::vector<Direction>>> cells;
  for (const auto& p : predictions) {
    if (p.class_id < 0 || p.class_id >= config.n_classes) {
      throw Error("prediction class " + std::to_string(p.class_id) + " out of range");
    }
    cells[{p.frame, p.class_id}].first.push_back(p.direction);
  }
  for (const auto& r : reference.events()) cells[{r.frame, r.class_id}].second.push_back(r.direction);

  std::vector<ClassStats> stats(static_cast<std::size_t>(config.n_classes));
  for (const auto& [cell, lists] : cells) {
    accumulate(stats, match_frame(lists.first, lists.second, cell.first, cell.second), config);
  }
  for (auto& s : stats) s.close_segments();
  return stats;
}

SeldScores evaluate(std::span<const DetectedEvent> predictions, const ClipAnnotation& reference,
                    const MetricConfig& config) {
  return finalize(evaluate_clip(predictions, reference, config), config);
}

std::vector<DetectedEvent> annotation_to_events(const ClipAnnotation& annotation) {
  std::vector<DetectedEvent> out;
  out.reserve(annotation.events().size());
  for (const auto& e : annotation.events()) out.push_back({e.frame, e.class_id, e.direction, 1.0});
  return out;
}

nlohmann::json scores_to_json(const SeldScores& scores, std::span<const ClassStats> stats) {
  nlohmann::json per_class = nlohmann::json::array();
  for (const auto& cs : scores.per_class) {
    nlohmann::json item{{"class_id", cs.class_id}, {"has_refs", cs.has_refs}};
    if (cs.has_refs) {
      item["er20"] = cs.er;
      item["f20"] = cs.f;
      item["le_cd"] = cs.le ? nlohmann::json(*cs.le) : nlohmann::json(nullptr);
      item["lr_cd"] = cs.lr;
    }
    if (static_cast<std::size_t>(cs.class_id) < stats.size()) {
      const auto& s = stats[static_cast<std::size_t>(cs.class_id)];
      item["tp"] = s.tp;
      item["fp"] = s.fp;
      item["fn"] = s.fn;
      item["ref_count"] = s.ref_count;
      item["loc_match_count"] = s.loc_match_count;
    }
    per_class.push_back(std::move(item));
  }
  return {{"er20", scores.er20},
          {"f20", scores.f20},
          {"le_cd", scores.le_cd},
          {"lr_cd", scores.lr_cd},
          {"per_class", per_class}};
}

}  // namespace seld
