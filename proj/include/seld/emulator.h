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

// Spatial scene emulation from dry class-wise samples, plus the dataset
// bookkeeping that goes with it: class-balanced down-sampling and the
// per-epoch real/emulated mix.

#ifndef SELD_EMULATOR_H_
#define SELD_EMULATOR_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "seld/audio.h"
#include "seld/geometry.h"
#include "seld/labels.h"
#include "seld/rng.h"

namespace seld {

// SN3D first-order gains (w, x, y, z) of a plane wave from d.
std::array<double, kFoaChannels> foa_encode_gains(const Direction& d);

// Parametric direct-plus-diffuse spatial room impulse response.
struct SrirSynthConfig {
  int sample_rate = kDefaultSampleRate;
  double direct_delay_ms = 5.0;
  double rt60_s = 0.3;
  // +infinity disables the diffuse tail.
  double direct_to_diffuse_db = 20.0;
  double ir_length_s = 0.5;

  void validate() const;
  nlohmann::json to_json() const;
  static SrirSynthConfig from_json(const nlohmann::json& j);
};

// Direct path: a delta at direct_delay_ms scaled by foa_encode_gains(d).
// Tail: independent white noise per channel under an envelope falling 60 dB
// per rt60_s, each channel scaled to total energy 10^(-ddr/10) relative to
// the unit direct path on W.
AudioClip synth_srir(const Direction& d, const SrirSynthConfig& config, Rng& rng);

// Convolves a mono sample with each IR channel; length sample + ir - 1.
AudioClip render_event(std::span<const double> sample, int sample_rate, const AudioClip& srir);

struct LibrarySample {
  std::string id;
  int class_id = 0;
  std::vector<double> waveform;
};

class SampleLibrary {
 public:
  explicit SampleLibrary(int sample_rate = kDefaultSampleRate) : sample_rate_(sample_rate) {}

  void add(LibrarySample sample);
  const LibrarySample& at(const std::string& id) const;
  bool contains(const std::string& id) const { return samples_.contains(id); }

  int sample_rate() const { return sample_rate_; }
  std::size_t size() const { return samples_.size(); }
  const std::map<std::string, LibrarySample>& samples() const { return samples_; }
  std::map<int, std::size_t> class_counts() const;

 private:
  int sample_rate_;
  std::map<std::string, LibrarySample> samples_;
};

// Deterministic class-dependent harmonic burst used as a stand-in for real
// class-wise recordings.
std::vector<double> synth_sample(int class_id, double duration_s, int sample_rate,
                                 std::uint64_t seed);

// {"sample_rate": 24000, "samples": [{"id", "class_id", "path"} |
//  {"id", "class_id", "synthetic": {"duration_s", "seed"}}]}. Relative paths
// resolve against base_dir; multichannel files contribute channel 0 (W).
SampleLibrary parse_library(const nlohmann::json& j, const std::filesystem::path& base_dir);
SampleLibrary read_library(const std::filesystem::path& path);

struct SceneEvent {
  int class_id = 0;
  std::string sample_id;
  double onset_s = 0.0;
  Direction direction;
};

struct SceneSpec {
  double duration_s = 5.0;
  std::vector<SceneEvent> events;
  double snr_db = 30.0;
  std::uint64_t seed = 0;
  int n_classes = kDefaultNumClasses;

  nlohmann::json to_json() const;
  static SceneSpec from_json(const nlohmann::json& j);
};

struct RenderedScene {
  AudioClip clip;
  ClipAnnotation annotation;
};

// Renders every event through its own synthetic SRIR, adds diffuse ambient
// noise at snr_db measured over event-active samples, and labels each 100 ms
// frame overlapped by an event's dry sample.
RenderedScene mix_scene(const SceneSpec& spec, const SampleLibrary& library,
                        const SrirSynthConfig& srir);

// Down-samples every class to the smallest nonzero class count.
SampleLibrary balance_classes(const SampleLibrary& library, std::uint64_t seed);

struct EpochSample {
  DatasetManifest manifest;
  bool emulated_missing = false;
};

// All real entries plus |real| emulated entries (without replacement unless
// there are fewer emulated than real entries), shuffled.
EpochSample sample_epoch(const DatasetManifest& real, const DatasetManifest& emulated,
                         std::uint64_t seed);

}  // namespace seld

#endif  // SELD_EMULATOR_H_
