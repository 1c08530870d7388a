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

// Command-line front end for the seld library. One subcommand per stage;
// configs are JSON, tables are CSV.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "seld/accdoa.h"
#include "seld/audio.h"
#include "seld/augment.h"
#include "seld/emulator.h"
#include "seld/error.h"
#include "seld/features.h"
#include "seld/labels.h"
#include "seld/metrics.h"
#include "seld/pipeline.h"
#include "seld/predictor.h"
#include "seld/rotation.h"
#include "seld/tta.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json load_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw seld::Error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw seld::Error(path.string() + ": " + e.what());
  }
}

void save_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw seld::Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

fs::path with_suffix(const std::string& prefix, const std::string& suffix) { return prefix + suffix; }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void write_events(const std::vector<seld::DetectedEvent>& events, int n_classes, const fs::path& out) {
  seld::write_labels(seld::events_to_annotation(events, n_classes), out);
}

// --model oracle:<labels.csv> | constant[:x,y,z] | external-file:<dir>[,<dir>...]
std::vector<std::unique_ptr<seld::Predictor>> parse_model(const std::string& spec,
                                                          const std::string& clip_id, double jitter,
                                                          int n_classes, std::uint64_t seed) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  std::vector<std::unique_ptr<seld::Predictor>> out;
  if (kind == "oracle") {
    if (arg.empty()) throw seld::Error("oracle model needs a label file: oracle:<labels.csv>");
    seld::OraclePredictorConfig oc;
    oc.jitter_deg = jitter;
    oc.seed = seed;
    oc.n_classes = n_classes;
    auto p = std::make_unique<seld::OraclePredictor>(oc);
    p->add_clip(clip_id, seld::read_labels(arg, n_classes));
    out.push_back(std::move(p));
  } else if (kind == "constant") {
    seld::Vec3 v;
    if (!arg.empty()) {
      const auto parts = split(arg, ',');
      if (parts.size() != 3) throw seld::Error("constant model takes constant:x,y,z");
      v = {std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2])};
    }
    out.push_back(std::make_unique<seld::ConstantPredictor>(n_classes, v));
  } else if (kind == "external-file") {
    const auto dirs = split(arg, ',');
    if (dirs.empty()) throw seld::Error("external-file model needs at least one directory");
    for (const auto& d : dirs) out.push_back(std::make_unique<seld::ExternalFilePredictor>(d));
  } else {
    throw seld::Error("unknown model '" + kind + "'");
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sound event localization and detection toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  const auto add_seed = [&seed](CLI::App* cmd) {
    return cmd->add_option("--seed", seed, "RNG seed");
  };

  // features extract
  auto* features = app.add_subcommand("features", "feature extraction");
  features->require_subcommand(1);
  auto* fx = features->add_subcommand("extract", "log-mel + intensity features of a FOA clip");
  std::string fx_in, fx_out, fx_config, fx_mask;
  fx->add_option("--in", fx_in)->required();
  fx->add_option("--out", fx_out)->required();
  fx->add_option("--config", fx_config, "feature config JSON");
  fx->add_option("--spec-augment", fx_mask, "augment config JSON whose specaugment block is applied");
  add_seed(fx);

  // rotate
  auto* rot = app.add_subcommand("rotate", "apply one of the 16 FOA patterns to audio and labels");
  int rot_pattern = 0;
  std::string rot_in, rot_labels, rot_prefix;
  rot->add_option("--pattern", rot_pattern)->required()->check(CLI::Range(0, 15));
  rot->add_option("--in", rot_in)->required();
  rot->add_option("--labels", rot_labels);
  rot->add_option("--out-prefix", rot_prefix)->required();
  add_seed(rot);

  // augment
  auto* aug = app.add_subcommand("augment", "random gain, pitch shift and band-pass");
  std::string aug_config, aug_in, aug_out;
  aug->add_option("--config", aug_config);
  aug->add_option("--in", aug_in)->required();
  aug->add_option("--out", aug_out)->required();
  auto* aug_seed = add_seed(aug);

  // emulate
  auto* emu = app.add_subcommand("emulate", "render a scene from a sample library");
  std::string emu_spec, emu_library, emu_prefix, emu_srir;
  emu->add_option("--spec", emu_spec)->required();
  emu->add_option("--library", emu_library)->required();
  emu->add_option("--out-prefix", emu_prefix)->required();
  emu->add_option("--srir", emu_srir, "SRIR synthesis config JSON");
  auto* emu_seed = add_seed(emu);

  // dataset
  auto* dataset = app.add_subcommand("dataset", "manifest utilities");
  dataset->require_subcommand(1);
  auto* epoch = dataset->add_subcommand("sample-epoch", "real + equally many emulated entries");
  std::string ep_real, ep_emu, ep_out;
  epoch->add_option("--real", ep_real)->required();
  epoch->add_option("--emulated", ep_emu)->required();
  epoch->add_option("--out", ep_out)->required();
  add_seed(epoch);
  auto* kfold = dataset->add_subcommand("kfold", "k-fold split of a manifest");
  std::string kf_manifest, kf_mode = "stratified", kf_prefix;
  int kf_k = 4;
  kfold->add_option("--manifest", kf_manifest)->required();
  kfold->add_option("--k", kf_k);
  kfold->add_option("--mode", kf_mode)->check(CLI::IsMember({"stratified", "room"}));
  kfold->add_option("--out-prefix", kf_prefix)->required();
  add_seed(kfold);

  // accdoa decode | encode
  auto* accdoa = app.add_subcommand("accdoa", "ACCDOA tensors");
  accdoa->require_subcommand(1);
  auto* dec = accdoa->add_subcommand("decode", "threshold an ACCDOA tensor into events");
  std::string dec_in, dec_out;
  double dec_tau = seld::kDefaultActivityThreshold;
  dec->add_option("--in", dec_in)->required();
  dec->add_option("--tau", dec_tau);
  dec->add_option("--out", dec_out)->required();
  add_seed(dec);
  auto* enc = accdoa->add_subcommand("encode", "labels CSV to an ACCDOA tensor");
  std::string enc_labels, enc_out;
  std::size_t enc_frames = 50;
  int enc_classes = seld::kDefaultNumClasses;
  enc->add_option("--labels", enc_labels)->required();
  enc->add_option("--frames", enc_frames, "label frames (50 for a 5 s clip)");
  enc->add_option("--n-classes", enc_classes);
  enc->add_option("--out", enc_out)->required();
  add_seed(enc);

  // tta run
  auto* tta = app.add_subcommand("tta", "test-time augmentation");
  tta->require_subcommand(1);
  auto* tta_run = tta->add_subcommand("run", "16-rotation inference with clustering aggregation");
  std::string tta_model, tta_in, tta_config, tta_out, tta_features, tta_clip_id;
  double tta_jitter = 0.0;
  int tta_classes = seld::kDefaultNumClasses;
  tta_run->add_option("--model", tta_model, "oracle:<labels.csv> | constant[:x,y,z] | external-file:<dir>[,...]")
      ->required();
  tta_run->add_option("--in", tta_in)->required();
  tta_run->add_option("--config", tta_config, "TTA config JSON");
  tta_run->add_option("--features", tta_features, "feature config JSON");
  tta_run->add_option("--out", tta_out)->required();
  tta_run->add_option("--clip-id", tta_clip_id, "defaults to the input file stem");
  tta_run->add_option("--jitter", tta_jitter, "oracle jitter in degrees");
  tta_run->add_option("--n-classes", tta_classes);
  add_seed(tta_run);

  // eval
  auto* ev = app.add_subcommand("eval", "SELD scores of predicted events against labels");
  std::string ev_pred, ev_ref, ev_out, ev_config;
  int ev_classes = seld::kDefaultNumClasses;
  ev->add_option("--pred", ev_pred)->required();
  ev->add_option("--ref", ev_ref)->required();
  ev->add_option("--out", ev_out)->required();
  ev->add_option("--config", ev_config, "metric config JSON");
  ev->add_option("--n-classes", ev_classes);
  add_seed(ev);

  // segment
  auto* seg = app.add_subcommand("segment", "cut a clip into overlapping windows");
  std::string seg_in, seg_prefix;
  double seg_window = 5.0, seg_hop = 1.0;
  seg->add_option("--in", seg_in)->required();
  seg->add_option("--out-prefix", seg_prefix)->required();
  seg->add_option("--window", seg_window);
  seg->add_option("--hop", seg_hop);
  add_seed(seg);

  // pipeline run
  auto* pipe = app.add_subcommand("pipeline", "end-to-end evaluation");
  pipe->require_subcommand(1);
  auto* pipe_run = pipe->add_subcommand("run", "run a RunConfig and write scores JSON");
  std::string pipe_config, pipe_out;
  pipe_run->add_option("--config", pipe_config)->required();
  pipe_run->add_option("--out", pipe_out, "overrides the config's output path");
  auto* pipe_seed = add_seed(pipe_run);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fx) {
      seld::FeatureConfig cfg;
      if (!fx_config.empty()) cfg = seld::FeatureConfig::from_json(load_json(fx_config));
      auto tensor = seld::extract_features(seld::load_clip(fx_in), cfg);
      if (!fx_mask.empty()) {
        const auto ac = seld::AugmentConfig::from_json(load_json(fx_mask));
        seld::Rng rng(seed);
        tensor = seld::spec_augment(tensor, ac.spec, rng);
      }
      seld::write_features(fx_out, tensor, cfg);
    } else if (*rot) {
      const auto& p = seld::pattern(rot_pattern);
      seld::save_clip(with_suffix(rot_prefix, ".wav"), seld::apply_to_audio(seld::load_clip(rot_in), p));
      if (!rot_labels.empty()) {
        seld::write_labels(seld::apply_to_annotation(seld::read_labels(rot_labels), p),
                           with_suffix(rot_prefix, ".csv"));
      }
    } else if (*aug) {
      seld::AugmentConfig cfg;
      if (!aug_config.empty()) cfg = seld::AugmentConfig::from_json(load_json(aug_config));
      seld::Rng rng(aug_seed->count() > 0 ? seed : cfg.seed);
      seld::save_clip(aug_out, seld::augment_waveform(seld::load_clip(aug_in), cfg, rng));
    } else if (*emu) {
      auto spec = seld::SceneSpec::from_json(load_json(emu_spec));
      if (emu_seed->count() > 0) spec.seed = seed;
      const auto library = seld::read_library(emu_library);
      seld::SrirSynthConfig srir;
      srir.sample_rate = library.sample_rate();
      if (!emu_srir.empty()) srir = seld::SrirSynthConfig::from_json(load_json(emu_srir));
      const auto scene = seld::mix_scene(spec, library, srir);
      seld::save_clip(with_suffix(emu_prefix, ".wav"), scene.clip);
      seld::write_labels(scene.annotation, with_suffix(emu_prefix, ".csv"));
    } else if (*epoch) {
      const auto result =
          seld::sample_epoch(seld::read_manifest(ep_real), seld::read_manifest(ep_emu), seed);
      if (result.emulated_missing) std::cerr << "warning: emulated manifest is empty\n";
      seld::write_manifest(result.manifest, ep_out);
    } else if (*kfold) {
      const auto mode = kf_mode == "room" ? seld::SplitMode::kByRoom : seld::SplitMode::kStratified;
      const auto folds = seld::kfold_split(seld::read_manifest(kf_manifest), kf_k, mode, seed);
      for (std::size_t i = 0; i < folds.size(); ++i) {
        seld::write_manifest(folds[i], with_suffix(kf_prefix, ".fold" + std::to_string(i) + ".json"));
      }
    } else if (*dec) {
      const auto seq = seld::read_accdoa(dec_in);
      write_events(seld::decode(seq, dec_tau), seq.n_classes(), dec_out);
    } else if (*enc) {
      seld::write_accdoa(enc_out, seld::encode(seld::read_labels(enc_labels, enc_classes), enc_frames));
    } else if (*tta_run) {
      seld::TtaConfig cfg;
      if (!tta_config.empty()) cfg = seld::TtaConfig::from_json(load_json(tta_config));
      seld::FeatureConfig fcfg;
      if (!tta_features.empty()) fcfg = seld::FeatureConfig::from_json(load_json(tta_features));
      const std::string clip_id = tta_clip_id.empty() ? fs::path(tta_in).stem().string() : tta_clip_id;
      const auto models = parse_model(tta_model, clip_id, tta_jitter, tta_classes, seed);
      std::vector<const seld::Predictor*> raw;
      for (const auto& m : models) raw.push_back(m.get());
      const auto events = seld::run_tta_ensemble(raw, seld::load_clip(tta_in), clip_id, fcfg, cfg);
      write_events(events, tta_classes, tta_out);
    } else if (*ev) {
      seld::MetricConfig cfg;
      cfg.n_classes = ev_classes;
      if (!ev_config.empty()) cfg = seld::MetricConfig::from_json(load_json(ev_config));
      const auto pred = seld::annotation_to_events(seld::read_labels(ev_pred, cfg.n_classes));
      const auto ref = seld::read_labels(ev_ref, cfg.n_classes);
      const auto stats = seld::evaluate_clip(pred, ref, cfg);
      save_json(ev_out, seld::scores_to_json(seld::finalize(stats, cfg), stats));
    } else if (*seg) {
      const auto parts = seld::segment_clip(seld::load_clip(seg_in), seg_window, seg_hop);
      for (std::size_t i = 0; i < parts.size(); ++i) {
        seld::save_clip(with_suffix(seg_prefix, ".seg" + std::to_string(i) + ".wav"), parts[i]);
      }
    } else if (*pipe_run) {
      auto cfg = seld::RunConfig::load(pipe_config);
      if (pipe_seed->count() > 0) cfg.seed = seed;
      if (!pipe_out.empty()) cfg.output = pipe_out;
      const auto result = seld::run_pipeline_to_file(cfg);
      for (const auto& f : result.failures) std::cerr << "failed: " << f.clip << ": " << f.error << '\n';
      if (!result.scores) {
        std::cerr << "error: " << result.error << '\n';
        return 1;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
