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

// Activity-coupled Cartesian DOA: one 3-vector per (label frame, class) whose
// length is the event activity and whose direction is the DOA.

#ifndef SELD_ACCDOA_H_
#define SELD_ACCDOA_H_

#include <cstddef>
#include <filesystem>
#include <vector>

#include "seld/geometry.h"
#include "seld/labels.h"

namespace seld {

inline constexpr double kDefaultActivityThreshold = 0.5;

class AccdoaSequence {
 public:
  AccdoaSequence() = default;
  AccdoaSequence(std::size_t frames, int n_classes);

  std::size_t frames() const { return frames_; }
  int n_classes() const { return n_classes_; }

  Vec3 get(std::size_t frame, int class_id) const;
  void set(std::size_t frame, int class_id, const Vec3& v);

  const std::vector<double>& raw() const { return values_; }

  bool operator==(const AccdoaSequence&) const = default;

 private:
  std::size_t index(std::size_t frame, int class_id) const;

  std::size_t frames_ = 0;
  int n_classes_ = 0;
  std::vector<double> values_;  // [frame][class][xyz]
};

struct DetectedEvent {
  int frame = 0;
  int class_id = 0;
  Direction direction;
  double activity = 0.0;
};

// Throws when an event frame is >= label_frames or when two tracks of one
// class share a frame (a single ACCDOA vector cannot hold both).
AccdoaSequence encode(const ClipAnnotation& annotation, std::size_t label_frames);

// Emits an event for every cell whose norm exceeds threshold, ordered by
// (frame, class).
std::vector<DetectedEvent> decode(const AccdoaSequence& seq,
                                  double threshold = kDefaultActivityThreshold);

// Events become labels; same-class events in one frame get track ids 0, 1, ...
// in input order.
ClipAnnotation events_to_annotation(const std::vector<DetectedEvent>& events, int n_classes);

void write_accdoa(const std::filesystem::path& path, const AccdoaSequence& seq);
AccdoaSequence read_accdoa(const std::filesystem::path& path);

}  // namespace seld

#endif  // SELD_ACCDOA_H_
