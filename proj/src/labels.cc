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

#include "seld/labels.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "seld/error.h"

namespace seld {

namespace {

auto key_of(const EventLabel& e) { return std::tuple(e.frame, e.class_id, e.track_id); }

template <typename T>
bool parse_field(std::string_view text, T& out) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\r')) text.remove_suffix(1);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

ClipAnnotation::ClipAnnotation(int n_classes) : n_classes_(n_classes) {
  if (n_classes <= 0) throw Error("n_classes must be positive");
}

void ClipAnnotation::add(const EventLabel& event) {
  if (event.frame < 0) throw Error("negative label frame");
  if (event.class_id < 0 || event.class_id >= n_classes_) {
    throw Error("class_id " + std::to_string(event.class_id) + " outside [0, " +
                std::to_string(n_classes_) + ")");
  }
  if (event.track_id < 0) throw Error("negative track_id");
  const auto it = std::lower_bound(events_.begin(), events_.end(), event,
                                   [](const EventLabel& a, const EventLabel& b) {
                                     return key_of(a) < key_of(b);
                                   });
  if (it != events_.end() && key_of(*it) == key_of(event)) {
    throw Error("duplicate label (frame " + std::to_string(event.frame) + ", class " +
                std::to_string(event.class_id) + ", track " + std::to_string(event.track_id) + ")");
  }
  events_.insert(it, event);
}

int ClipAnnotation::frame_extent() const {
  return events_.empty() ? 0 : events_.back().frame + 1;
}

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error("cannot format number");
  return std::string(buf, ptr);
}

ClipAnnotation parse_labels(std::istream& in, int n_classes) {
  ClipAnnotation annotation(n_classes);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    const auto fail = [&](const std::string& why) {
      return Error("labels line " + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() != 5) {
      throw fail("expected 5 columns (frame,class_id,track_id,azimuth,elevation), got " +
                 std::to_string(fields.size()));
    }
    EventLabel event;
    double azimuth = 0.0, elevation = 0.0;
    if (!parse_field(fields[0], event.frame) || !parse_field(fields[1], event.class_id) ||
        !parse_field(fields[2], event.track_id) || !parse_field(fields[3], azimuth) ||
        !parse_field(fields[4], elevation)) {
      throw fail("malformed row '" + line + "'");
    }
    try {
      event.direction = Direction(azimuth, elevation);
      annotation.add(event);
    } catch (const Error& e) {
      throw fail(e.what());
    }
  }
  return annotation;
}

ClipAnnotation read_labels(const std::filesystem::path& path, int n_classes) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return parse_labels(in, n_classes);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void format_labels(const ClipAnnotation& annotation, std::ostream& out) {
  for (const auto& e : annotation.events()) {
    out << e.frame << ',' << e.class_id << ',' << e.track_id << ','
        << format_number(e.direction.azimuth()) << ',' << format_number(e.direction.elevation())
        << '\n';
  }
}

void write_labels(const ClipAnnotation& annotation, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  format_labels(annotation, out);
}

void DatasetManifest::validate() const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].clip_path.empty() || entries[i].label_path.empty()) {
      throw Error("manifest entry " + std::to_string(i) + ": empty path");
    }
  }
}

DatasetManifest parse_manifest(const std::string& json_text) {
  const auto doc = nlohmann::json::parse(json_text);
  DatasetManifest manifest;
  for (const auto& item : doc.at("entries")) {
    ManifestEntry e;
    e.clip_path = item.at("clip_path").get<std::string>();
    e.label_path = item.at("label_path").get<std::string>();
    const auto origin = item.at("origin").get<std::string>();
    if (origin == "real") {
      e.origin = Origin::kReal;
    } else if (origin == "emulated") {
      e.origin = Origin::kEmulated;
    } else {
      throw Error("manifest origin must be 'real' or 'emulated', got '" + origin + "'");
    }
    if (item.contains("fold_tag")) e.fold_tag = item["fold_tag"].get<std::string>();
    if (item.contains("room_tag")) e.room_tag = item["room_tag"].get<std::string>();
    if (item.contains("class_id")) e.class_id = item["class_id"].get<int>();
    e.duration_s = item.value("duration_s", 0.0);
    manifest.entries.push_back(std::move(e));
  }
  manifest.validate();
  return manifest;
}

std::string dump_manifest(const DatasetManifest& manifest) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : manifest.entries) {
    nlohmann::json item;
    item["clip_path"] = e.clip_path;
    item["label_path"] = e.label_path;
    item["origin"] = e.origin == Origin::kReal ? "real" : "emulated";
    if (e.fold_tag) item["fold_tag"] = *e.fold_tag;
    if (e.room_tag) item["room_tag"] = *e.room_tag;
    if (e.class_id) item["class_id"] = *e.class_id;
    item["duration_s"] = e.duration_s;
    entries.push_back(std::move(item));
  }
  return nlohmann::json{{"entries", entries}}.dump(2) + "\n";
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_manifest(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << dump_manifest(manifest);
}

}  // namespace seld
