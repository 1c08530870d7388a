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

#include "seld/emulator.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>

#include "seld/error.h"
#include "seld/fft.h"
#include "seld/predictor.h"

namespace seld {

namespace {

constexpr std::uint64_t kNoiseStream = 0xA5A5A5A5ULL;

double json_db(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (j.at(key).is_null()) return std::numeric_limits<double>::infinity();
  return j.at(key).get<double>();
}

template <typename T>
void shuffle_with(std::vector<T>& v, Rng& rng) {
  // Fisher-Yates; spelled out so the permutation only depends on Rng output.
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace

std::array<double, kFoaChannels> foa_encode_gains(const Direction& d) {
  const UnitVec3 u = dir_to_unit(d);
  return {1.0, u.x(), u.y(), u.z()};
}

void SrirSynthConfig::validate() const {
  if (sample_rate <= 0) throw Error("SRIR sample_rate must be positive");
  if (!(direct_delay_ms >= 0.0)) throw Error("direct_delay_ms must be non-negative");
  if (!(rt60_s > 0.0)) throw Error("rt60_s must be positive");
  if (std::isnan(direct_to_diffuse_db)) throw Error("direct_to_diffuse_db must be a number");
  if (!(ir_length_s > direct_delay_ms / 1000.0)) {
    throw Error("ir_length_s must exceed the direct-path delay");
  }
}

nlohmann::json SrirSynthConfig::to_json() const {
  return {{"sample_rate", sample_rate},
          {"direct_delay_ms", direct_delay_ms},
          {"rt60_s", rt60_s},
          {"direct_to_diffuse_db", std::isinf(direct_to_diffuse_db)
                                       ? nlohmann::json(nullptr)
                                       : nlohmann::json(direct_to_diffuse_db)},
          {"ir_length_s", ir_length_s}};
}

SrirSynthConfig SrirSynthConfig::from_json(const nlohmann::json& j) {
  SrirSynthConfig c;
  c.sample_rate = j.value("sample_rate", c.sample_rate);
  c.direct_delay_ms = j.value("direct_delay_ms", c.direct_delay_ms);
  c.rt60_s = j.value("rt60_s", c.rt60_s);
  c.direct_to_diffuse_db = json_db(j, "direct_to_diffuse_db", c.direct_to_diffuse_db);
  c.ir_length_s = j.value("ir_length_s", c.ir_length_s);
  c.validate();
  return c;
}

AudioClip synth_srir(const Direction& d, const SrirSynthConfig& config, Rng& rng) {
  config.validate();
  const auto length = static_cast<std::size_t>(std::llround(config.ir_length_s * config.sample_rate));
  const auto delay =
      static_cast<std::size_t>(std::llround(config.direct_delay_ms * config.sample_rate / 1000.0));
  AudioClip ir(config.sample_rate, length);
  const auto gains = foa_encode_gains(d);
  for (int c = 0; c < kFoaChannels; ++c) ir.channels[c][delay] = gains[c];

  if (std::isinf(config.direct_to_diffuse_db) && config.direct_to_diffuse_db > 0) return ir;
  const double target_energy = std::pow(10.0, -config.direct_to_diffuse_db / 10.0);
  const double decay_per_sample = -3.0 / (config.rt60_s * config.sample_rate);  // log10 amplitude
  std::normal_distribution<double> gauss;
  for (int c = 0; c < kFoaChannels; ++c) {
    double energy = 0.0;
    for (std::size_t i = delay + 1; i < length; ++i) {
      const double env = std::pow(10.0, decay_per_sample * static_cast<double>(i - delay));
      const double v = gauss(rng) * env;
      ir.channels[c][i] = v;
      energy += v * v;
    }
    if (energy > 0.0) {
      const double scale = std::sqrt(target_energy / energy);
      for (std::size_t i = delay + 1; i < length; ++i) ir.channels[c][i] *= scale;
    }
  }
  return ir;
}

AudioClip render_event(std::span<const double> sample, int sample_rate, const AudioClip& srir) {
  srir.validate();
  if (sample_rate != srir.sample_rate) {
    throw Error("sample rate " + std::to_string(sample_rate) + " Hz does not match SRIR rate " +
                std::to_string(srir.sample_rate) + " Hz");
  }
  AudioClip out;
  out.sample_rate = sample_rate;
  for (int c = 0; c < kFoaChannels; ++c) out.channels[c] = convolve(sample, srir.channels[c]);
  return out;
}

void SampleLibrary::add(LibrarySample sample) {
  if (sample.waveform.empty()) throw Error("library sample '" + sample.id + "' is empty");
  if (sample.class_id < 0) throw Error("library sample '" + sample.id + "' has a negative class");
  const std::string id = sample.id;
  if (!samples_.emplace(id, std::move(sample)).second) {
    throw Error("duplicate library sample id '" + id + "'");
  }
}

const LibrarySample& SampleLibrary::at(const std::string& id) const {
  const auto it = samples_.find(id);
  if (it == samples_.end()) throw Error("sample '" + id + "' not in library");
  return it->second;
}

std::map<int, std::size_t> SampleLibrary::class_counts() const {
  std::map<int, std::size_t> counts;
  for (const auto& [id, s] : samples_) ++counts[s.class_id];
  return counts;
}

std::vector<double> synth_sample(int class_id, double duration_s, int sample_rate,
                                 std::uint64_t seed) {
  if (!(duration_s > 0.0)) throw Error("sample duration must be positive");
  const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
  Rng rng(mix_seed(seed, static_cast<std::uint64_t>(class_id)));
  std::normal_distribution<double> gauss;
  const double f0 = 220.0 * std::pow(2.0, class_id / 4.0) *
                    std::uniform_real_distribution<double>(0.97, 1.03)(rng);
  const double attack = 0.01 * sample_rate;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    double v = 0.0;
    for (int h = 1; h <= 3; ++h) {
      if (f0 * h < sample_rate / 2.0) v += std::sin(2.0 * std::numbers::pi * f0 * h * t) / h;
    }
    const double env = std::min(1.0, i / attack) * std::min(1.0, static_cast<double>(n - i) / attack);
    out[i] = 0.3 * env * (v + 0.05 * gauss(rng));
  }
  return out;
}

SampleLibrary parse_library(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  SampleLibrary library(j.value("sample_rate", kDefaultSampleRate));
  for (const auto& item : j.at("samples")) {
    LibrarySample s;
    s.id = item.at("id").get<std::string>();
    s.class_id = item.at("class_id").get<int>();
    if (item.contains("path")) {
      std::filesystem::path p = item.at("path").get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      const Waveform wave = read_wav(p);
      if (wave.sample_rate != library.sample_rate()) {
        throw Error(p.string() + ": sample rate " + std::to_string(wave.sample_rate) +
                    " Hz, library expects " + std::to_string(library.sample_rate()) + " Hz");
      }
      s.waveform = wave.channels.at(0);
    } else if (item.contains("synthetic")) {
      const auto& syn = item.at("synthetic");
      s.waveform = synth_sample(s.class_id, syn.value("duration_s", 1.0), library.sample_rate(),
                                syn.value("seed", std::uint64_t{0}));
    } else {
      throw Error("library sample '" + s.id + "' needs 'path' or 'synthetic'");
    }
    library.add(std::move(s));
  }
  return library;
}

SampleLibrary read_library(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return parse_library(nlohmann::json::parse(in), path.parent_path());
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

nlohmann::json SceneSpec::to_json() const {
  nlohmann::json evs = nlohmann::json::array();
  for (const auto& e : events) {
    evs.push_back({{"class_id", e.class_id},
                   {"sample_id", e.sample_id},
                   {"onset_s", e.onset_s},
                   {"azimuth", e.direction.azimuth()},
                   {"elevation", e.direction.elevation()}});
  }
  return {{"duration_s", duration_s}, {"snr_db", snr_db}, {"seed", seed},
          {"n_classes", n_classes},   {"events", evs}};
}

SceneSpec SceneSpec::from_json(const nlohmann::json& j) {
  SceneSpec s;
  s.duration_s = j.at("duration_s").get<double>();
  s.snr_db = j.value("snr_db", s.snr_db);
  s.seed = j.value("seed", s.seed);
  s.n_classes = j.value("n_classes", s.n_classes);
  for (const auto& e : j.value("events", nlohmann::json::array())) {
    s.events.push_back({e.at("class_id").get<int>(), e.at("sample_id").get<std::string>(),
                        e.at("onset_s").get<double>(),
                        Direction(e.at("azimuth").get<double>(), e.at("elevation").get<double>())});
  }
  return s;
}

RenderedScene mix_scene(const SceneSpec& spec, const SampleLibrary& library,
                        const SrirSynthConfig& srir) {
  srir.validate();
  if (!(spec.duration_s > 0.0)) throw Error("scene duration must be positive");
  if (!std::isfinite(spec.snr_db)) throw Error("scene snr_db must be finite");
  if (srir.sample_rate != library.sample_rate()) throw Error("SRIR and library sample rates differ");
  const int rate = library.sample_rate();
  const auto n = static_cast<std::size_t>(std::llround(spec.duration_s * rate));
  const auto frame_len = static_cast<std::size_t>(std::llround(kLabelFrameSeconds * rate));

  RenderedScene scene{AudioClip(rate, n), ClipAnnotation(spec.n_classes)};
  std::vector<bool> active(n, false);
  struct Placed {
    int class_id;
    std::size_t frame_begin, frame_end;
    int track;
  };
  std::vector<Placed> placed;

  for (std::size_t k = 0; k < spec.events.size(); ++k) {
    const SceneEvent& ev = spec.events[k];
    const LibrarySample& sample = library.at(ev.sample_id);
    if (sample.class_id != ev.class_id) {
      throw Error("scene event " + std::to_string(k) + ": sample '" + ev.sample_id +
                  "' belongs to class " + std::to_string(sample.class_id) + ", not " +
                  std::to_string(ev.class_id));
    }
    if (!(ev.onset_s >= 0.0)) throw Error("scene event " + std::to_string(k) + ": negative onset");
    const auto onset = static_cast<std::size_t>(std::llround(ev.onset_s * rate));
    const std::size_t end = onset + sample.waveform.size();
    if (end > n) {
      throw Error("scene event " + std::to_string(k) + " runs past the scene duration");
    }

    Rng rng(mix_seed(spec.seed, k));
    const AudioClip rendered = render_event(sample.waveform, rate, synth_srir(ev.direction, srir, rng));
    for (int c = 0; c < kFoaChannels; ++c) {
      const std::size_t count = std::min(rendered.num_samples(), n - onset);
      for (std::size_t i = 0; i < count; ++i) scene.clip.channels[c][onset + i] += rendered.channels[c][i];
    }
    std::fill(active.begin() + static_cast<std::ptrdiff_t>(onset),
              active.begin() + static_cast<std::ptrdiff_t>(end), true);

    const std::size_t frame_begin = onset / frame_len;
    const std::size_t frame_end = (end + frame_len - 1) / frame_len;
    std::set<int> busy;
    for (const auto& p : placed) {
      if (p.class_id == ev.class_id && p.frame_begin < frame_end && frame_begin < p.frame_end) {
        busy.insert(p.track);
      }
    }
    int track = 0;
    while (busy.contains(track)) ++track;
    placed.push_back({ev.class_id, frame_begin, frame_end, track});
    for (std::size_t f = frame_begin; f < frame_end; ++f) {
      scene.annotation.add({static_cast<int>(f), ev.class_id, track, ev.direction});
    }
  }

  // Diffuse ambient noise: independent white noise on every channel.
  Rng noise_rng(mix_seed(spec.seed, kNoiseStream));
  std::normal_distribution<double> gauss;
  std::array<std::vector<double>, kFoaChannels> noise;
  for (auto& ch : noise) {
    ch.resize(n);
    for (double& v : ch) v = gauss(noise_rng);
  }
  double signal_power = 0.0, noise_power = 0.0;
  std::size_t active_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!active[i]) continue;
    ++active_count;
    for (int c = 0; c < kFoaChannels; ++c) {
      signal_power += scene.clip.channels[c][i] * scene.clip.channels[c][i];
      noise_power += noise[c][i] * noise[c][i];
    }
  }
  double scale = 0.0;
  if (active_count > 0 && signal_power > 0.0) {
    scale = std::sqrt(signal_power / (noise_power * std::pow(10.0, spec.snr_db / 10.0)));
  } else {
    // No event energy to reference: unit-power reference over the whole clip.
    double total = 0.0;
    for (const auto& ch : noise) {
      for (const double v : ch) total += v * v;
    }
    if (total > 0.0) scale = std::sqrt(static_cast<double>(n) * std::pow(10.0, -spec.snr_db / 10.0) / total);
  }
  for (int c = 0; c < kFoaChannels; ++c) {
    for (std::size_t i = 0; i < n; ++i) scene.clip.channels[c][i] += scale * noise[c][i];
  }
  return scene;
}

SampleLibrary balance_classes(const SampleLibrary& library, std::uint64_t seed) {
  if (library.size() == 0) throw Error("cannot balance an empty library");
  std::map<int, std::vector<std::string>> by_class;
  for (const auto& [id, s] : library.samples()) by_class[s.class_id].push_back(id);
  std::size_t target = std::numeric_limits<std::size_t>::max();
  for (const auto& [c, ids] : by_class) target = std::min(target, ids.size());

  Rng rng(seed);
  SampleLibrary out(library.sample_rate());
  for (auto& [c, ids] : by_class) {
    shuffle_with(ids, rng);
    for (std::size_t i = 0; i < target; ++i) out.add(library.at(ids[i]));
  }
  return out;
}

EpochSample sample_epoch(const DatasetManifest& real, const DatasetManifest& emulated,
                         std::uint64_t seed) {
  if (real.empty()) throw Error("external mix needs at least one real entry");
  Rng rng(seed);
  EpochSample out;
  out.manifest.entries = real.entries;
  if (emulated.empty()) {
    out.emulated_missing = true;
  } else if (emulated.size() >= real.size()) {
    std::vector<std::size_t> idx(emulated.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    // Partial Fisher-Yates: the first |real| slots form the draw.
    for (std::size_t i = 0; i < real.size(); ++i) {
      const std::size_t j = std::uniform_int_distribution<std::size_t>(i, idx.size() - 1)(rng);
      std::swap(idx[i], idx[j]);
      out.manifest.entries.push_back(emulated.entries[idx[i]]);
    }
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, emulated.size() - 1);
    for (std::size_t i = 0; i < real.size(); ++i) out.manifest.entries.push_back(emulated.entries[pick(rng)]);
  }
  shuffle_with(out.manifest.entries, rng);
  return out;
}

}  // namespace seld
