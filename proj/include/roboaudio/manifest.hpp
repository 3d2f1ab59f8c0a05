// Copyright 2026 The roboaudio Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "roboaudio/scene.hpp"

namespace roboaudio {

// One line of a JSON-lines manifest: {"id": ..., "path": ...}. The path
// points at a six-channel WAV for simulation/front-end runs or a posterior
// file for keyword decisions.
struct ManifestEntry {
  std::string id;
  std::string path;
};

// Throws ParseError (with line number) on malformed JSON or duplicate ids.
std::vector<ManifestEntry> read_manifest(const std::string& path);
void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries);

enum class LabelKind {
  kKws,  // labels in {0, 1}
  kSsl,  // labels in 1..360
};

struct LabelRow {
  std::string id;
  int label = 0;
};

// Text label files: one "id label" pair per line. The label alphabet is
// enforced on read and write; violations raise ParseError/ParamError.
std::vector<LabelRow> read_label_file(const std::string& path, LabelKind kind);
void write_label_file(const std::string& path, const std::vector<LabelRow>& rows, LabelKind kind);

// Ground truth as emitted by the simulator, one JSON record per scene.
struct GroundTruthRecord {
  std::string id;
  GroundTruth truth;
  // Context for the record: room box and device placement.
  double room_lx = 0.0, room_ly = 0.0, room_lz = 0.0, rt60 = 0.0;
  Vec3 device_origin{0.0, 0.0, 0.0};
  double heading_deg = 0.0;
  std::vector<Vec3> speech_positions;
  std::vector<Vec3> noise_positions;
};

std::string ground_truth_to_json(const GroundTruthRecord& record);
GroundTruthRecord ground_truth_from_json(const std::string& line, size_t line_no = 0);

std::vector<GroundTruthRecord> read_ground_truth(const std::string& path);
void write_ground_truth(const std::string& path, const std::vector<GroundTruthRecord>& records);

}  // namespace roboaudio
