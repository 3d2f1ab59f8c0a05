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

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "roboaudio/scene.hpp"

namespace roboaudio {

// Parsed INI document: section -> key -> raw value. Lines are
// "[section]", "key = value", blank, or comments starting with '#' or ';'.
using IniDoc = std::map<std::string, std::map<std::string, std::string>>;

IniDoc parse_ini(std::istream& in);
IniDoc parse_ini_file(const std::string& path);

// Random-scene generator configuration. Defaults cover the full
// challenge-conformant ranges.
struct SimConfig {
  double lx_min = 3.0, lx_max = 8.0;
  double ly_min = 3.0, ly_max = 8.0;
  double lz = 3.0;
  double rt60_min = 0.2, rt60_max = 0.8;

  double distance_min = 1.5, distance_max = 5.0;
  double snr_min_db = -5.0, snr_max_db = 10.0;
  double ser_min_db = -5.0, ser_max_db = 10.0;
  double keyword_probability = 0.5;

  double duration_s = 4.0;
  std::vector<std::string> scenarios{"X", "X+Noise", "X+Echo", "X+Noise+Echo", "X+Echo+Mech"};

  // Throws ParamError naming every offending key at once.
  void validate() const;

  // Strict mapping from the [room]/[sources]/[scene] sections; unknown
  // sections or keys are errors so typos cannot silently disappear.
  static SimConfig from_ini(const IniDoc& doc);
  static SimConfig from_file(const std::string& path);
};

// Draws one scene: room box, device pose, source placements, and levels, all
// from the seed. Source signals are left empty for simulate_scene to
// synthesize. Deterministic: equal (config, seed) gives equal specs.
SceneSpec generate_scene_spec(const SimConfig& config, uint64_t seed);

}  // namespace roboaudio
