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
#include <optional>
#include <string>
#include <vector>

#include "roboaudio/audio.hpp"
#include "roboaudio/rng.hpp"
#include "roboaudio/room.hpp"

namespace roboaudio {

// Speech carries the utterance; Keyword is speech containing the wake word.
// Noise is a far-field interferer; Echo plays through the device loudspeakers
// and Mech is the device's own mechanical noise. Echo/Mech positions are
// device-mounted, so SceneSource::position is ignored for those roles.
enum class SourceRole { kSpeech, kKeyword, kNoise, kEcho, kMech };

enum class LevelKind { kReference, kSnrDb, kSerDb };

struct SourceLevel {
  LevelKind kind = LevelKind::kReference;
  double db = 0.0;
};

struct SceneSource {
  SourceRole role = SourceRole::kSpeech;
  Vec3 position{0.0, 0.0, 0.0};
  // Mono samples at the room sample rate. Empty = synthesize a
  // role-appropriate signal from the scene seed.
  std::vector<double> signal;
  SourceLevel level;
};

struct SceneSpec {
  RoomSpec room;
  DeviceGeometry device;
  std::vector<SceneSource> sources;
  // Scene length when every source signal is synthesized; otherwise the
  // longest provided signal wins.
  double duration_s = 4.0;
  // Scenes default to fractional-delay taps: nearest-sample rounding leaves
  // sub-sample time differences unrepresentable across a 3.7 cm array.
  RirTapMode tap_mode = RirTapMode::kInterpolated;

  bool challenge_conformant() const;
};

struct GroundTruth {
  bool keyword_present = false;
  std::vector<int> speech_doas;  // degrees 1..360, device convention
  std::vector<int> noise_doas;
  std::string scenario_tag;  // "X", "X+Noise", "X+Echo", "X+Noise+Echo", "X+Echo+Mech"
  std::optional<double> snr_db;
  std::optional<double> ser_db;
  std::optional<double> mech_snr_db;
};

struct SimulatedScene {
  MultiChannelAudio audio;  // six channels: mic0..mic3, ref0, ref1
  GroundTruth truth;
  // Per-source gain applied when summing, aligned with SceneSpec::sources.
  std::vector<double> applied_scales;
};

// Canonical scenario tag for a role combination; throws ParamError for
// combinations outside the five supported scenarios.
std::string scenario_tag_for(bool has_noise, bool has_echo, bool has_mech);

// Deterministic role-appropriate test signal (shaped noise, tone complexes).
std::vector<double> synthesize_source_signal(SourceRole role, size_t length, int sample_rate,
                                             Rng& rng);

// Scales the interferer so 10*log10(P_target / P_interferer) = ratio_db with
// powers taken as the mean square of channel 0, then returns the sum.
MultiChannelAudio mix_at_ratio(const MultiChannelAudio& target, const MultiChannelAudio& interferer,
                               double ratio_db);

// Renders one source's contribution to the six-channel output: its signal
// convolved with the RIR from its (possibly device-mounted) position to each
// mic, gain applied to the mic channels. An echo source additionally routes
// its raw, unscaled signal to both reference channels.
MultiChannelAudio render_source_contribution(const SceneSpec& spec, const SceneSource& source,
                                             double scale, size_t scene_len);

// Full scene: per-source renders, interferers scaled to their requested
// ratios against the post-reverberation speech at mic 0, summed. Ground-truth
// DOAs use the 90-degrees-is-ahead device convention. Deterministic per seed.
SimulatedScene simulate_scene(const SceneSpec& spec, uint64_t seed);

}  // namespace roboaudio
