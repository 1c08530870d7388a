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

#include "seld/accdoa.h"

#include <array>
#include <map>
#include <string>
#include <utility>

#include "seld/error.h"
#include "seld/tensor_io.h"

namespace seld {

AccdoaSequence::AccdoaSequence(std::size_t frames, int n_classes)
    : frames_(frames), n_classes_(n_classes) {
  if (n_classes <= 0) throw Error("n_classes must be positive");
  values_.assign(frames * static_cast<std::size_t>(n_classes) * 3, 0.0);
}

std::size_t AccdoaSequence::index(std::size_t frame, int class_id) const {
  if (frame >= frames_ || class_id < 0 || class_id >= n_classes_) {
    throw Error("ACCDOA cell (" + std::to_string(frame) + ", " + std::to_string(class_id) +
                ") out of range");
  }
  return (frame * static_cast<std::size_t>(n_classes_) + static_cast<std::size_t>(class_id)) * 3;
}

Vec3 AccdoaSequence::get(std::size_t frame, int class_id) const {
  const std::size_t i = index(frame, class_id);
  return {values_[i], values_[i + 1], values_[i + 2]};
}

void AccdoaSequence::set(std::size_t frame, int class_id, const Vec3& v) {
  const std::size_t i = index(frame, class_id);
  values_[i] = v.x;
  values_[i + 1] = v.y;
  values_[i + 2] = v.z;
}

AccdoaSequence encode(const ClipAnnotation& annotation, std::size_t label_frames) {
  AccdoaSequence seq(label_frames, annotation.n_classes());
  const EventLabel* previous = nullptr;
  for (const auto& e : annotation.events()) {
    if (static_cast<std::size_t>(e.frame) >= label_frames) {
      throw Error("label frame " + std::to_string(e.frame) + " beyond sequence length " +
                  std::to_string(label_frames));
    }
    if (previous != nullptr && previous->frame == e.frame && previous->class_id == e.class_id) {
      throw Error("same-class overlap at frame " + std::to_string(e.frame) + ", class " +
                  std::to_string(e.class_id) + ": single-track ACCDOA cannot encode it");
    }
    seq.set(static_cast<std::size_t>(e.frame), e.class_id, dir_to_unit(e.direction).vec());
    previous = &e;
  }
  return seq;
}

std::vector<DetectedEvent> decode(const AccdoaSequence& seq, double threshold) {
  std::vector<DetectedEvent> events;
  for (std::size_t t = 0; t < seq.frames(); ++t) {
    for (int c = 0; c < seq.n_classes(); ++c) {
      const Vec3 v = seq.get(t, c);
      const double activity = norm(v);
      if (activity > threshold) {
        events.push_back({static_cast<int>(t), c, unit_to_dir(v), activity});
      }
    }
  }
  return events;
}

ClipAnnotation events_to_annotation(const std::vector<DetectedEvent>& events, int n_classes) {
  ClipAnnotation annotation(n_classes);
  std::map<std::pair<int, int>, int> next_track;
  for (const auto& e : events) {
    const int track = next_track[{e.frame, e.class_id}]++;
    annotation.add({e.frame, e.class_id, track, e.direction});
  }
  return annotation;
}

void write_accdoa(const std::filesystem::path& path, const AccdoaSequence& seq) {
  const std::array<std::size_t, 3> dims{seq.frames(), static_cast<std::size_t>(seq.n_classes()), 3};
  const std::vector<float> values(seq.raw().begin(), seq.raw().end());
  write_tensor(path, dims, values, {{"layout", "frame,class,xyz"}});
}

AccdoaSequence read_accdoa(const std::filesystem::path& path) {
  const auto stored = read_tensor(path);
  if (stored.dims.size() != 3 || stored.dims[2] != 3) {
    throw Error(path.string() + ": ACCDOA tensor must have dims [frames, classes, 3]");
  }
  AccdoaSequence seq(stored.dims[0], static_cast<int>(stored.dims[1]));
  for (std::size_t t = 0; t < seq.frames(); ++t) {
    for (int c = 0; c < seq.n_classes(); ++c) {
      const std::size_t i = (t * stored.dims[1] + static_cast<std::size_t>(c)) * 3;
      seq.set(t, c, {stored.values[i], stored.values[i + 1], stored.values[i + 2]});
    }
  }
  return seq;
}

}  // namespace seld
