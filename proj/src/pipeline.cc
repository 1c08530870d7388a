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

#include "seld/pipeline.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <thread>

#include "seld/error.h"

namespace seld {

std::vector<AudioClip> segment_clip(const AudioClip& clip, double window_s, double hop_s) {
  clip.validate();
  if (!(window_s > 0.0) || !(hop_s > 0.0)) throw Error("segment window and hop must be positive");
  const auto window = static_cast<std::size_t>(std::llround(window_s * clip.sample_rate));
  const auto hop = static_cast<std::size_t>(std::llround(hop_s * clip.sample_rate));
  if (window == 0 || hop == 0) throw Error("segment window and hop must span at least one sample");
  const std::size_t n = clip.num_samples();

  std::vector<AudioClip> out;
  if (n < window) {
    AudioClip padded(clip.sample_rate, window);
    for (int c = 0; c < kFoaChannels; ++c) {
      std::copy(clip.channels[c].begin(), clip.channels[c].end(), padded.channels[c].begin());
    }
    out.push_back(std::move(padded));
    return out;
  }
  const std::size_t count = 1 + (n - window) / hop;
  for (std::size_t s = 0; s < count; ++s) {
    AudioClip seg;
    seg.sample_rate = clip.sample_rate;
    for (int c = 0; c < kFoaChannels; ++c) {
      const auto begin = clip.channels[c].begin() + static_cast<std::ptrdiff_t>(s * hop);
      seg.channels[c].assign(begin, begin + static_cast<std::ptrdiff_t>(window));
    }
    out.push_back(std::move(seg));
  }
  return out;
}

std::vector<DatasetManifest> kfold_split(const DatasetManifest& manifest, int k, SplitMode mode,
                                         std::uint64_t seed) {
  if (k < 2) throw Error("k-fold split needs k >= 2");
  const auto folds = static_cast<std::size_t>(k);
  Rng rng(seed);
  const auto shuffle = [&rng](std::vector<std::size_t>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[std::uniform_int_distribution<std::size_t>(0, i - 1)(rng)]);
    }
  };

  std::vector<std::size_t> fold_of(manifest.size());
  if (mode == SplitMode::kStratified) {
    std::map<std::optional<int>, std::vector<std::size_t>> strata;
    for (std::size_t i = 0; i < manifest.size(); ++i) strata[manifest.entries[i].class_id].push_back(i);
    std::size_t next = 0;
    for (auto& [cls, idx] : strata) {
      shuffle(idx);
      for (const std::size_t i : idx) fold_of[i] = next++ % folds;
    }
  } else {
    std::map<std::string, std::vector<std::size_t>> rooms;
    for (std::size_t i = 0; i < manifest.size(); ++i) {
      const auto& room = manifest.entries[i].room_tag;
      if (!room) throw Error("room-wise split: entry " + std::to_string(i) + " has no room_tag");
      rooms[*room].push_back(i);
    }
    if (rooms.size() < folds) {
      throw Error("room-wise split: " + std::to_string(rooms.size()) + " rooms cannot fill " +
                  std::to_string(k) + " folds");
    }
    std::vector<std::size_t> order(rooms.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    shuffle(order);
    std::vector<const std::vector<std::size_t>*> room_lists;
    for (const auto& [name, idx] : rooms) room_lists.push_back(&idx);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return room_lists[a]->size() > room_lists[b]->size();
    });
    std::vector<std::size_t> load(folds, 0);
    for (const std::size_t r : order) {
      const std::size_t f =
          static_cast<std::size_t>(std::min_element(load.begin(), load.end()) - load.begin());
      load[f] += room_lists[r]->size();
      for (const std::size_t i : *room_lists[r]) fold_of[i] = f;
    }
  }

  std::vector<DatasetManifest> out(folds);
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    ManifestEntry e = manifest.entries[i];
    e.fold_tag = "fold" + std::to_string(fold_of[i]);
    out[fold_of[i]].entries.push_back(std::move(e));
  }
  return out;
}

namespace {

std::string resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_relative() ? (base / path).string() : path.string();
}

}  // namespace

PredictorSpec PredictorSpec::from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  PredictorSpec s;
  s.type = j.value("type", s.type);
  s.jitter_deg = j.value("jitter_deg", s.jitter_deg);
  s.activity = j.value("activity", s.activity);
  s.seed = j.value("seed", s.seed);
  if (j.contains("value")) {
    const auto v = j.at("value").get<std::vector<double>>();
    if (v.size() != 3) throw Error("constant predictor value must have 3 components");
    s.constant = {v[0], v[1], v[2]};
  }
  for (const auto& d : j.value("dirs", std::vector<std::string>{})) s.dirs.push_back(resolve(base_dir, d));
  if (s.type != "oracle" && s.type != "constant" && s.type != "external-file") {
    throw Error("unknown predictor type '" + s.type + "'");
  }
  if (s.type == "external-file" && s.dirs.empty()) {
    throw Error("external-file predictor needs at least one entry in 'dirs'");
  }
  return s;
}

nlohmann::json PredictorSpec::to_json() const {
  nlohmann::json j{{"type", type}};
  if (type == "oracle") {
    j["jitter_deg"] = jitter_deg;
    j["activity"] = activity;
    j["seed"] = seed;
  } else if (type == "constant") {
    j["value"] = {constant.x, constant.y, constant.z};
  } else {
    j["dirs"] = dirs;
  }
  return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  RunConfig c;
  c.manifest = resolve(base_dir, j.at("manifest").get<std::string>());
  c.output = resolve(base_dir, j.value("output", std::string("scores.json")));
  c.seed = j.value("seed", c.seed);
  c.workers = j.value("workers", c.workers);
  if (const char* env = std::getenv("SELD_WORKERS"); env != nullptr && *env != '\0') {
    c.workers = std::atoi(env);
  }
  if (c.workers < 1) c.workers = 1;
  if (j.contains("features")) c.features = FeatureConfig::from_json(j.at("features"));
  if (j.contains("augment")) {
    c.augment_enabled = j.at("augment").value("enabled", false);
    c.augment = AugmentConfig::from_json(j.at("augment"));
  }
  if (j.contains("tta")) {
    c.tta_enabled = j.at("tta").value("enabled", true);
    c.tta = TtaConfig::from_json(j.at("tta"));
  }
  if (j.contains("metrics")) c.metrics = MetricConfig::from_json(j.at("metrics"));
  if (j.contains("predictor")) c.predictor = PredictorSpec::from_json(j.at("predictor"), base_dir);
  c.features.validate();
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return from_json(nlohmann::json::parse(in), path.parent_path());
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json aug = augment.to_json();
  aug["enabled"] = augment_enabled;
  nlohmann::json tta_json = tta.to_json();
  tta_json["enabled"] = tta_enabled;
  // Paths and worker count are left out so the record only depends on what
  // affects the scores.
  return {{"seed", seed},
          {"features", features.to_json()},
          {"augment", aug},
          {"tta", tta_json},
          {"metrics", metrics.to_json()},
          {"predictor", predictor.to_json()}};
}

std::vector<std::unique_ptr<Predictor>> make_predictors(const PredictorSpec& spec,
                                                        const std::string& clip_id,
                                                        const ClipAnnotation& annotation,
                                                        std::uint64_t run_seed) {
  std::vector<std::unique_ptr<Predictor>> out;
  if (spec.type == "oracle") {
    OraclePredictorConfig oc;
    oc.jitter_deg = spec.jitter_deg;
    oc.activity = spec.activity;
    oc.seed = mix_seed(run_seed, spec.seed);
    oc.n_classes = annotation.n_classes();
    auto oracle = std::make_unique<OraclePredictor>(oc);
    oracle->add_clip(clip_id, annotation);
    out.push_back(std::move(oracle));
  } else if (spec.type == "constant") {
    out.push_back(std::make_unique<ConstantPredictor>(annotation.n_classes(), spec.constant));
  } else if (spec.type == "external-file") {
    for (const auto& d : spec.dirs) out.push_back(std::make_unique<ExternalFilePredictor>(d));
  } else {
    throw Error("unknown predictor type '" + spec.type + "'");
  }
  return out;
}

std::vector<DetectedEvent> predict_clip(const std::vector<std::unique_ptr<Predictor>>& predictors,
                                        const AudioClip& clip, const std::string& clip_id,
                                        const RunConfig& config) {
  if (predictors.empty()) throw Error("no predictor configured");
  if (config.tta_enabled) {
    std::vector<const Predictor*> raw;
    for (const auto& p : predictors) raw.push_back(p.get());
    return run_tta_ensemble(raw, clip, clip_id, config.features, config.tta);
  }
  const FeatureTensor features = extract_features(clip, config.features);
  AccdoaSequence mean = predictors.front()->predict(features, {clip_id, 0});
  for (std::size_t i = 1; i < predictors.size(); ++i) {
    const AccdoaSequence other = predictors[i]->predict(features, {clip_id, 0});
    if (other.frames() != mean.frames() || other.n_classes() != mean.n_classes()) {
      throw Error("ensemble members disagree on ACCDOA dims");
    }
    for (std::size_t t = 0; t < mean.frames(); ++t) {
      for (int c = 0; c < mean.n_classes(); ++c) mean.set(t, c, mean.get(t, c) + other.get(t, c));
    }
  }
  if (predictors.size() > 1) {
    const double inv = 1.0 / static_cast<double>(predictors.size());
    for (std::size_t t = 0; t < mean.frames(); ++t) {
      for (int c = 0; c < mean.n_classes(); ++c) mean.set(t, c, mean.get(t, c) * inv);
    }
  }
  return decode(mean, config.tta.activity_threshold);
}

nlohmann::json PipelineResult::to_json() const {
  nlohmann::json j;
  if (scores) {
    j["scores"] = scores_to_json(*scores, stats);
  } else {
    j["scores"] = nullptr;
    j["error"] = error;
  }
  j["n_entries"] = n_entries;
  j["n_evaluated"] = n_evaluated;
  nlohmann::json fails = nlohmann::json::array();
  for (const auto& f : failures) fails.push_back({{"clip", f.clip}, {"error", f.error}});
  j["failures"] = fails;
  return j;
}

PipelineResult run_pipeline(const RunConfig& config) {
  const DatasetManifest manifest = read_manifest(config.manifest);
  const auto base = config.manifest.parent_path();
  const std::size_t n = manifest.size();

  struct Outcome {
    std::optional<std::vector<ClassStats>> stats;
    std::string error;
  };
  std::vector<Outcome> outcomes(n);
  const auto process = [&](std::size_t i) {
    const ManifestEntry& entry = manifest.entries[i];
    const std::string clip_id = std::filesystem::path(entry.clip_path).stem().string();
    try {
      AudioClip clip = load_clip(resolve(base, entry.clip_path));
      const ClipAnnotation reference =
          read_labels(resolve(base, entry.label_path), config.metrics.n_classes);
      if (config.augment_enabled) {
        Rng rng(mix_seed(config.seed, hash_string(entry.clip_path)));
        clip = augment_waveform(clip, config.augment, rng);
      }
      const auto predictors = make_predictors(config.predictor, clip_id, reference, config.seed);
      const auto events = predict_clip(predictors, clip, clip_id, config);
      outcomes[i].stats = evaluate_clip(events, reference, config.metrics);
    } catch (const std::exception& e) {
      outcomes[i].error = e.what();
    }
  };

  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(config.workers, 1)),
                                                    std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) process(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) process(i);
      });
    }
  }

  PipelineResult result;
  result.n_entries = n;
  result.stats.assign(static_cast<std::size_t>(config.metrics.n_classes), ClassStats{});
  for (std::size_t i = 0; i < n; ++i) {
    if (outcomes[i].stats) {
      for (std::size_t c = 0; c < result.stats.size(); ++c) result.stats[c].merge((*outcomes[i].stats)[c]);
      ++result.n_evaluated;
    } else {
      result.failures.push_back({manifest.entries[i].clip_path, outcomes[i].error});
    }
  }
  try {
    result.scores = finalize(result.stats, config.metrics);
  } catch (const Error& e) {
    result.error = e.what();
  }
  return result;
}

PipelineResult run_pipeline_to_file(const RunConfig& config) {
  PipelineResult result = run_pipeline(config);
  nlohmann::json doc = result.to_json();
  doc["config"] = config.to_json();
  std::ofstream out(config.output, std::ios::binary);
  if (!out) throw Error("cannot write " + config.output.string());
  out << doc.dump(2) << '\n';
  return result;
}

}  // namespace seld
