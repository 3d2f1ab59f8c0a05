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

#include "roboaudio/manifest.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "roboaudio/errors.hpp"

namespace roboaudio {

namespace {

using nlohmann::json;

json vec3_to_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

Vec3 vec3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument("expected [x, y, z]");
  return Vec3{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

void check_label(int label, LabelKind kind) {
  if (kind == LabelKind::kKws) {
    if (label != 0 && label != 1) throw ParamError("KWS label must be 0 or 1");
  } else {
    if (label < 1 || label > 360) throw ParamError("SSL label must be in 1..360");
  }
}

}  // namespace

std::vector<ManifestEntry> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path);

  std::vector<ManifestEntry> entries;
  std::set<std::string> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
      ManifestEntry e;
      e.id = j.at("id").get<std::string>();
      e.path = j.at("path").get<std::string>();
      if (e.id.empty()) throw std::invalid_argument("empty id");
      if (!seen.insert(e.id).second) throw std::invalid_argument("duplicate id '" + e.id + "'");
      entries.push_back(std::move(e));
    } catch (const std::exception& ex) {
      throw ParseError(std::string("manifest: ") + ex.what(), line_no);
    }
  }
  return entries;
}

void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open manifest for writing: " + path);
  for (const auto& e : entries) {
    json j;
    j["id"] = e.id;
    j["path"] = e.path;
    out << j.dump() << "\n";
  }
  if (!out) throw IoError("failed writing manifest: " + path);
}

std::vector<LabelRow> read_label_file(const std::string& path, LabelKind kind) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open label file: " + path);

  std::vector<LabelRow> rows;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    LabelRow row;
    std::string label_text, extra;
    if (!(ls >> row.id >> label_text) || (ls >> extra))
      throw ParseError("label line must be 'id label'", line_no);
    try {
      size_t consumed = 0;
      row.label = std::stoi(label_text, &consumed);
      if (consumed != label_text.size()) throw std::invalid_argument("trailing characters");
      check_label(row.label, kind);
    } catch (const std::exception&) {
      throw ParseError("bad label '" + label_text + "'", line_no);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_label_file(const std::string& path, const std::vector<LabelRow>& rows, LabelKind kind) {
  for (const auto& row : rows) check_label(row.label, kind);
  std::ofstream out(path);
  if (!out) throw IoError("cannot open label file for writing: " + path);
  for (const auto& row : rows) out << row.id << " " << row.label << "\n";
  if (!out) throw IoError("failed writing label file: " + path);
}

std::string ground_truth_to_json(const GroundTruthRecord& record) {
  json j;
  j["id"] = record.id;
  j["scenario"] = record.truth.scenario_tag;
  j["keyword"] = record.truth.keyword_present;
  j["speech_doas"] = record.truth.speech_doas;
  j["noise_doas"] = record.truth.noise_doas;
  if (record.truth.snr_db) j["snr_db"] = *record.truth.snr_db;
  if (record.truth.ser_db) j["ser_db"] = *record.truth.ser_db;
  if (record.truth.mech_snr_db) j["mech_snr_db"] = *record.truth.mech_snr_db;
  j["room"] = {{"lx", record.room_lx},
               {"ly", record.room_ly},
               {"lz", record.room_lz},
               {"rt60", record.rt60}};
  json positions;
  positions["device"] = vec3_to_json(record.device_origin);
  positions["heading_deg"] = record.heading_deg;
  json speech = json::array();
  for (const auto& p : record.speech_positions) speech.push_back(vec3_to_json(p));
  positions["speech"] = speech;
  json noise = json::array();
  for (const auto& p : record.noise_positions) noise.push_back(vec3_to_json(p));
  positions["noise"] = noise;
  j["positions"] = positions;
  return j.dump();
}

GroundTruthRecord ground_truth_from_json(const std::string& line, size_t line_no) {
  try {
    const json j = json::parse(line);
    GroundTruthRecord r;
    r.id = j.at("id").get<std::string>();
    r.truth.scenario_tag = j.at("scenario").get<std::string>();
    r.truth.keyword_present = j.at("keyword").get<bool>();
    r.truth.speech_doas = j.at("speech_doas").get<std::vector<int>>();
    r.truth.noise_doas = j.at("noise_doas").get<std::vector<int>>();
    if (j.contains("snr_db")) r.truth.snr_db = j["snr_db"].get<double>();
    if (j.contains("ser_db")) r.truth.ser_db = j["ser_db"].get<double>();
    if (j.contains("mech_snr_db")) r.truth.mech_snr_db = j["mech_snr_db"].get<double>();
    const json& room = j.at("room");
    r.room_lx = room.at("lx").get<double>();
    r.room_ly = room.at("ly").get<double>();
    r.room_lz = room.at("lz").get<double>();
    r.rt60 = room.at("rt60").get<double>();
    const json& positions = j.at("positions");
    r.device_origin = vec3_from_json(positions.at("device"));
    r.heading_deg = positions.at("heading_deg").get<double>();
    for (const auto& p : positions.at("speech")) r.speech_positions.push_back(vec3_from_json(p));
    for (const auto& p : positions.at("noise")) r.noise_positions.push_back(vec3_from_json(p));
    return r;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ParseError(std::string("ground truth: ") + ex.what(), line_no);
  }
}

std::vector<GroundTruthRecord> read_ground_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open ground truth: " + path);

  std::vector<GroundTruthRecord> records;
  std::set<std::string> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    GroundTruthRecord r = ground_truth_from_json(line, line_no);
    if (!seen.insert(r.id).second)
      throw ParseError("ground truth: duplicate id '" + r.id + "'", line_no);
    records.push_back(std::move(r));
  }
  return records;
}

void write_ground_truth(const std::string& path, const std::vector<GroundTruthRecord>& records) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open ground truth for writing: " + path);
  for (const auto& r : records) out << ground_truth_to_json(r) << "\n";
  if (!out) throw IoError("failed writing ground truth: " + path);
}

}  // namespace roboaudio
