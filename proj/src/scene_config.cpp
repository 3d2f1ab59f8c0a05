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

#include "roboaudio/scene_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "roboaudio/errors.hpp"

namespace roboaudio {

namespace {

constexpr double kPi = std::numbers::pi;
// Keep sources and the device this far away from every wall.
constexpr double kWallMargin = 0.3;

std::string trim(const std::string& s) {
  const size_t first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const size_t last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& section, const std::string& key, const std::string& value) {
  try {
    size_t consumed = 0;
    const double v = std::stod(value, &consumed);
    if (consumed != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ParamError("config [" + section + "] " + key + ": bad number '" + value + "'");
  }
}

const std::set<std::string>& known_scenarios() {
  static const std::set<std::string> tags{"X", "X+Noise", "X+Echo", "X+Noise+Echo", "X+Echo+Mech"};
  return tags;
}

}  // namespace

IniDoc parse_ini(std::istream& in) {
  IniDoc doc;
  std::string line, section;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#' || text[0] == ';') continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ParseError("unterminated section header", line_no);
      section = trim(text.substr(1, text.size() - 2));
      if (section.empty()) throw ParseError("empty section name", line_no);
      doc[section];  // materialize even if the section stays empty
      continue;
    }
    const size_t eq = text.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
    if (section.empty()) throw ParseError("key outside any section", line_no);
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", line_no);
    if (!doc[section].emplace(key, value).second)
      throw ParseError("duplicate key '" + key + "' in section [" + section + "]", line_no);
  }
  return doc;
}

IniDoc parse_ini_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);
  return parse_ini(in);
}

void SimConfig::validate() const {
  std::vector<std::string> bad;
  auto require = [&](bool ok, const char* key) {
    if (!ok) bad.push_back(key);
  };
  require(lx_min > 0.0 && lx_min <= lx_max, "room.lx_min/lx_max");
  require(ly_min > 0.0 && ly_min <= ly_max, "room.ly_min/ly_max");
  require(lz > 0.0, "room.lz");
  require(rt60_min >= 0.0 && rt60_min <= rt60_max, "room.rt60_min/rt60_max");
  require(distance_min > 0.0 && distance_min <= distance_max, "sources.distance_min/distance_max");
  require(snr_min_db <= snr_max_db, "sources.snr_min_db/snr_max_db");
  require(ser_min_db <= ser_max_db, "sources.ser_min_db/ser_max_db");
  require(keyword_probability >= 0.0 && keyword_probability <= 1.0,
          "sources.keyword_probability");
  require(duration_s > 0.0, "scene.duration_s");
  require(!scenarios.empty(), "scene.scenarios");
  for (const auto& tag : scenarios)
    if (!known_scenarios().count(tag)) bad.push_back("scene.scenarios (unknown tag '" + tag + "')");

  if (!bad.empty()) {
    std::string msg = "invalid simulation config:";
    for (const auto& k : bad) msg += " " + k;
    throw ParamError(msg);
  }
}

SimConfig SimConfig::from_ini(const IniDoc& doc) {
  SimConfig cfg;
  std::vector<std::string> unknown;

  for (const auto& [section, entries] : doc) {
    for (const auto& [key, value] : entries) {
      bool handled = true;
      if (section == "room") {
        if (key == "lx_min") cfg.lx_min = parse_double(section, key, value);
        else if (key == "lx_max") cfg.lx_max = parse_double(section, key, value);
        else if (key == "ly_min") cfg.ly_min = parse_double(section, key, value);
        else if (key == "ly_max") cfg.ly_max = parse_double(section, key, value);
        else if (key == "lz") cfg.lz = parse_double(section, key, value);
        else if (key == "rt60_min") cfg.rt60_min = parse_double(section, key, value);
        else if (key == "rt60_max") cfg.rt60_max = parse_double(section, key, value);
        else handled = false;
      } else if (section == "sources") {
        if (key == "distance_min") cfg.distance_min = parse_double(section, key, value);
        else if (key == "distance_max") cfg.distance_max = parse_double(section, key, value);
        else if (key == "snr_min_db") cfg.snr_min_db = parse_double(section, key, value);
        else if (key == "snr_max_db") cfg.snr_max_db = parse_double(section, key, value);
        else if (key == "ser_min_db") cfg.ser_min_db = parse_double(section, key, value);
        else if (key == "ser_max_db") cfg.ser_max_db = parse_double(section, key, value);
        else if (key == "keyword_probability")
          cfg.keyword_probability = parse_double(section, key, value);
        else handled = false;
      } else if (section == "scene") {
        if (key == "duration_s") {
          cfg.duration_s = parse_double(section, key, value);
        } else if (key == "scenarios") {
          cfg.scenarios.clear();
          std::stringstream ss(value);
          std::string tag;
          while (std::getline(ss, tag, ',')) {
            tag = trim(tag);
            if (!tag.empty()) cfg.scenarios.push_back(tag);
          }
        } else {
          handled = false;
        }
      } else {
        handled = false;
      }
      if (!handled) unknown.push_back("[" + section + "] " + key);
    }
  }
  if (!unknown.empty()) {
    std::string msg = "unknown config keys:";
    for (const auto& k : unknown) msg += " " + k;
    throw ParamError(msg);
  }
  return cfg;
}

SimConfig SimConfig::from_file(const std::string& path) { return from_ini(parse_ini_file(path)); }

SceneSpec generate_scene_spec(const SimConfig& config, uint64_t seed) {
  config.validate();
  Rng rng(splitmix64(seed));

  for (int attempt = 0; attempt < 50; ++attempt) {
    RoomSpec room;
    room.lx = rng.uniform(config.lx_min, config.lx_max);
    room.ly = rng.uniform(config.ly_min, config.ly_max);
    room.lz = config.lz;
    room.rt60 = rng.uniform(config.rt60_min, config.rt60_max);

    // Device somewhere walkable; array height clear of the loudspeaker drop.
    const double margin = kWallMargin + 0.05;
    if (room.lx <= 2 * margin || room.ly <= 2 * margin || room.lz <= 2 * margin)
      throw GeometryError("room too small to place the device");
    Vec3 origin{rng.uniform(margin, room.lx - margin), rng.uniform(margin, room.ly - margin),
                rng.uniform(0.45, std::min(1.2, room.lz - margin))};
    const double heading = rng.uniform(0.0, 360.0);
    DeviceGeometry device = place_device(room, origin, heading);

    const std::string tag =
        config.scenarios[static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(config.scenarios.size()) - 1))];
    const bool keyword = rng.uniform() < config.keyword_probability;
    const bool has_noise = tag.find("+Noise") != std::string::npos;
    const bool has_echo = tag.find("+Echo") != std::string::npos;
    const bool has_mech = tag.find("+Mech") != std::string::npos;

    // External sources: azimuth in the device frame, Euclidean distance from
    // the array center, modest height offset.
    auto place_external = [&](Vec3* out) {
      for (int tries = 0; tries < 100; ++tries) {
        const int az = static_cast<int>(rng.uniform_int(1, 360));
        const double dist = rng.uniform(config.distance_min, config.distance_max);
        const double z = rng.uniform(std::max(kWallMargin, origin[2] - 0.3),
                                     std::min(room.lz - kWallMargin, origin[2] + 0.6));
        const double dz = z - origin[2];
        if (dist <= std::abs(dz) + 0.1) continue;
        const double horiz = std::sqrt(dist * dist - dz * dz);
        const double world_rad = (heading + az - 90.0) * kPi / 180.0;
        const Vec3 pos{origin[0] + horiz * std::cos(world_rad),
                       origin[1] + horiz * std::sin(world_rad), z};
        if (pos[0] < kWallMargin || pos[0] > room.lx - kWallMargin) continue;
        if (pos[1] < kWallMargin || pos[1] > room.ly - kWallMargin) continue;
        *out = pos;
        return true;
      }
      return false;
    };

    Vec3 speech_pos{};
    if (!place_external(&speech_pos)) continue;
    Vec3 noise_pos{};
    if (has_noise && !place_external(&noise_pos)) continue;

    SceneSpec spec;
    spec.room = room;
    spec.device = device;
    spec.duration_s = config.duration_s;

    SceneSource speech;
    speech.role = keyword ? SourceRole::kKeyword : SourceRole::kSpeech;
    speech.position = speech_pos;
    speech.level = {LevelKind::kReference, 0.0};
    spec.sources.push_back(speech);

    if (has_noise) {
      SceneSource noise;
      noise.role = SourceRole::kNoise;
      noise.position = noise_pos;
      noise.level = {LevelKind::kSnrDb, rng.uniform(config.snr_min_db, config.snr_max_db)};
      spec.sources.push_back(noise);
    }
    if (has_echo) {
      SceneSource echo;
      echo.role = SourceRole::kEcho;
      echo.level = {LevelKind::kSerDb, rng.uniform(config.ser_min_db, config.ser_max_db)};
      spec.sources.push_back(echo);
    }
    if (has_mech) {
      SceneSource mech;
      mech.role = SourceRole::kMech;
      mech.level = {LevelKind::kSnrDb, rng.uniform(config.snr_min_db, config.snr_max_db)};
      spec.sources.push_back(mech);
    }
    return spec;
  }
  throw GeometryError("could not place sources after 50 attempts; check room/distance ranges");
}

}  // namespace roboaudio
