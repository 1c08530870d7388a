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

#include "seld/audio.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "seld/error.h"

namespace seld {

AudioClip::AudioClip(int rate, std::size_t num_samples) : sample_rate(rate) {
  for (auto& ch : channels) ch.assign(num_samples, 0.0);
}

void AudioClip::validate() const {
  if (sample_rate <= 0) throw Error("sample rate must be positive");
  for (const auto& ch : channels) {
    if (ch.size() != channels[0].size()) throw Error("FOA channels differ in length");
  }
}

AudioClip to_clip(const Waveform& wave) {
  if (wave.channels.size() != kFoaChannels) {
    throw Error("expected a 4-channel FOA signal, got " + std::to_string(wave.channels.size()) +
                " channel(s)");
  }
  AudioClip clip;
  clip.sample_rate = wave.sample_rate;
  for (int c = 0; c < kFoaChannels; ++c) clip.channels[c] = wave.channels[c];
  clip.validate();
  return clip;
}

Waveform to_waveform(const AudioClip& clip) {
  Waveform wave;
  wave.sample_rate = clip.sample_rate;
  wave.channels.assign(clip.channels.begin(), clip.channels.end());
  return wave;
}

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

}  // namespace

Waveform read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(path.string() + ": not a RIFF/WAVE file");
  }

  std::uint16_t format = 0, num_channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = std::min<std::size_t>(size, bytes.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (available < 16) throw Error(path.string() + ": truncated fmt chunk");
      format = read_u16(chunk + 8);
      num_channels = read_u16(chunk + 10);
      rate = read_u32(chunk + 12);
      bits = read_u16(chunk + 22);
      if (format == kFormatExtensible) {
        if (available < 26) throw Error(path.string() + ": truncated extensible fmt chunk");
        format = read_u16(chunk + 8 + 24);
      }
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_size = available;
    }
    pos = body + size + (size & 1u);
  }
  if (num_channels == 0 || rate == 0) throw Error(path.string() + ": missing fmt chunk");
  if (data == nullptr) throw Error(path.string() + ": missing data chunk");

  const bool is_pcm = format == kFormatPcm && (bits == 16 || bits == 24 || bits == 32);
  const bool is_float = format == kFormatFloat && (bits == 32 || bits == 64);
  if (!is_pcm && !is_float) {
    throw Error(path.string() + ": unsupported sample format " + std::to_string(format) + "/" +
                std::to_string(bits) + " bit");
  }

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t frames = data_size / (bytes_per_sample * num_channels);
  Waveform wave;
  wave.sample_rate = static_cast<int>(rate);
  wave.channels.assign(num_channels, std::vector<double>(frames));
  for (std::size_t n = 0; n < frames; ++n) {
    for (std::size_t c = 0; c < num_channels; ++c) {
      const unsigned char* p = data + (n * num_channels + c) * bytes_per_sample;
      double value = 0.0;
      if (is_float && bits == 32) {
        float f;
        std::memcpy(&f, p, 4);
        value = f;
      } else if (is_float) {
        std::memcpy(&value, p, 8);
      } else if (bits == 16) {
        value = static_cast<std::int16_t>(read_u16(p)) / 32768.0;
      } else if (bits == 24) {
        std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
        if (v & 0x800000) v -= 0x1000000;
        value = v / 8388608.0;
      } else {
        value = static_cast<std::int32_t>(read_u32(p)) / 2147483648.0;
      }
      wave.channels[c][n] = value;
    }
  }
  return wave;
}

void write_wav(const std::filesystem::path& path, const Waveform& wave, SampleFormat format) {
  const std::size_t num_channels = wave.channels.size();
  if (num_channels == 0) throw Error("cannot write a waveform without channels");
  for (const auto& ch : wave.channels) {
    if (ch.size() != wave.num_samples()) throw Error("channels differ in length");
  }
  const std::uint16_t bits = format == SampleFormat::kPcm16 ? 16 : format == SampleFormat::kPcm24 ? 24 : 32;
  const std::uint16_t tag = format == SampleFormat::kFloat32 ? kFormatFloat : kFormatPcm;
  const std::size_t frames = wave.num_samples();
  const std::uint32_t data_size = static_cast<std::uint32_t>(frames * num_channels * (bits / 8));

  std::string out;
  out.reserve(44 + data_size);
  out += "RIFF";
  put_u32(out, 36 + data_size);
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, tag);
  put_u16(out, static_cast<std::uint16_t>(num_channels));
  put_u32(out, static_cast<std::uint32_t>(wave.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(wave.sample_rate * num_channels * (bits / 8)));
  put_u16(out, static_cast<std::uint16_t>(num_channels * (bits / 8)));
  put_u16(out, bits);
  out += "data";
  put_u32(out, data_size);
  for (std::size_t n = 0; n < frames; ++n) {
    for (std::size_t c = 0; c < num_channels; ++c) {
      const double v = wave.channels[c][n];
      if (format == SampleFormat::kFloat32) {
        const float f = static_cast<float>(v);
        char buf[4];
        std::memcpy(buf, &f, 4);
        out.append(buf, 4);
      } else {
        const double scale = format == SampleFormat::kPcm16 ? 32768.0 : 8388608.0;
        const auto q = static_cast<std::int32_t>(
            std::clamp<long>(std::lround(v * scale), static_cast<long>(-scale), static_cast<long>(scale) - 1));
        for (int b = 0; b < bits / 8; ++b) out.push_back(static_cast<char>((q >> (8 * b)) & 0xFF));
      }
    }
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot write " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
}

AudioClip load_clip(const std::filesystem::path& path) { return to_clip(read_wav(path)); }

void save_clip(const std::filesystem::path& path, const AudioClip& clip, SampleFormat format) {
  clip.validate();
  write_wav(path, to_waveform(clip), format);
}

}  // namespace seld
