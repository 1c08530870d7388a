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

#ifndef SELD_AUDIO_H_
#define SELD_AUDIO_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <vector>

namespace seld {

inline constexpr int kDefaultSampleRate = 24000;
inline constexpr int kFoaChannels = 4;

// ACN channel indices of a first-order ambisonic signal.
enum FoaChannel : int { kW = 0, kX = 1, kY = 2, kZ = 3 };

// Generic multichannel waveform as read from or written to WAV.
struct Waveform {
  int sample_rate = kDefaultSampleRate;
  std::vector<std::vector<double>> channels;

  std::size_t num_samples() const { return channels.empty() ? 0 : channels.front().size(); }
};

// Four-channel FOA clip, ACN order (W, X, Y, Z), SN3D normalization.
struct AudioClip {
  int sample_rate = kDefaultSampleRate;
  std::array<std::vector<double>, kFoaChannels> channels;

  AudioClip() = default;
  AudioClip(int rate, std::size_t num_samples);

  std::size_t num_samples() const { return channels[0].size(); }
  double duration_s() const { return static_cast<double>(num_samples()) / sample_rate; }

  // Throws seld::Error when channel lengths differ or the rate is not positive.
  void validate() const;

  bool operator==(const AudioClip&) const = default;
};

// Throws seld::Error unless the waveform has exactly four channels.
AudioClip to_clip(const Waveform& wave);
Waveform to_waveform(const AudioClip& clip);

enum class SampleFormat { kPcm16, kPcm24, kFloat32 };

// RIFF/WAVE reader for PCM 16/24/32-bit and IEEE float 32/64-bit data,
// including WAVE_FORMAT_EXTENSIBLE headers.
Waveform read_wav(const std::filesystem::path& path);
void write_wav(const std::filesystem::path& path, const Waveform& wave,
               SampleFormat format = SampleFormat::kFloat32);

AudioClip load_clip(const std::filesystem::path& path);
void save_clip(const std::filesystem::path& path, const AudioClip& clip,
               SampleFormat format = SampleFormat::kFloat32);

}  // namespace seld

#endif  // SELD_AUDIO_H_
