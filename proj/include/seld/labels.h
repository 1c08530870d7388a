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

#ifndef SELD_LABELS_H_
#define SELD_LABELS_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "seld/geometry.h"

namespace seld {

inline constexpr int kDefaultNumClasses = 13;
// Label frames are 100 ms long.
inline constexpr double kLabelFrameSeconds = 0.1;

struct EventLabel {
  int frame = 0;
  int class_id = 0;
  int track_id = 0;
  Direction direction;

  bool operator==(const EventLabel&) const = default;
};

// Frame-wise ground truth for one clip. Events stay sorted by
// (frame, class_id, track_id) and that key is unique.
class ClipAnnotation {
 public:
  explicit ClipAnnotation(int n_classes = kDefaultNumClasses);

  // Inserts in sorted position. Throws on a duplicate key or an invalid class.
  void add(const EventLabel& event);

  const std::vector<EventLabel>& events() const { return events_; }
  int n_classes() const { return n_classes_; }
  bool empty() const { return events_.empty(); }
  // One past the largest labelled frame; 0 when empty.
  int frame_extent() const;

  bool operator==(const ClipAnnotation&) const = default;

 private:
  int n_classes_;
  std::vector<EventLabel> events_;
};

// CSV rows `frame,class_id,track_id,azimuth,elevation`, no header.
ClipAnnotation parse_labels(std::istream& in, int n_classes = kDefaultNumClasses);
ClipAnnotation read_labels(const std::filesystem::path& path, int n_classes = kDefaultNumClasses);
void format_labels(const ClipAnnotation& annotation, std::ostream& out);
void write_labels(const ClipAnnotation& annotation, const std::filesystem::path& path);

// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

enum class Origin { kReal, kEmulated };

struct ManifestEntry {
  std::string clip_path;
  std::string label_path;
  Origin origin = Origin::kReal;
  std::optional<std::string> fold_tag;
  std::optional<std::string> room_tag;
  // Dominant class for sample-level manifests; used by stratified splits.
  std::optional<int> class_id;
  double duration_s = 0.0;

  bool operator==(const ManifestEntry&) const = default;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
  void validate() const;
};

DatasetManifest parse_manifest(const std::string& json_text);
std::string dump_manifest(const DatasetManifest& manifest);
DatasetManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

}  // namespace seld

#endif  // SELD_LABELS_H_
