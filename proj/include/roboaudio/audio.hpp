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

#include <string>
#include <vector>

namespace roboaudio {

enum class ChannelRole { kMono, kMic, kLoudspeakerRef };

struct ChannelInfo {
  ChannelRole role = ChannelRole::kMono;
  int index = 0;  // index within the role (Mic 0..3, Ref 0..1)
};

// Sample-rate-tagged PCM matrix. Samples are doubles in [-1, 1) after reading
// 16-bit files. The six-channel robot layout (mic0..mic3, ref0, ref1) is the
// distinguished case: four head microphones plus the two loudspeaker feeds.
struct MultiChannelAudio {
  std::vector<std::vector<double>> samples;  // [channel][sample]
  int sample_rate = 16000;
  std::vector<ChannelInfo> channel_roles;

  size_t channels() const { return samples.size(); }
  size_t length() const { return samples.empty() ? 0 : samples[0].size(); }

  bool has_robot_layout() const;

  // Throws ParamError if channel lengths disagree, the rate is invalid, or
  // declared robot-layout roles are inconsistent.
  void validate() const;

  static MultiChannelAudio mono(std::vector<double> x, int rate);

  // Builds a six-channel signal with the fixed role order mic0..mic3, ref0, ref1.
  static MultiChannelAudio robot_layout(std::vector<std::vector<double>> six, int rate);

  // Same layout, zero-filled.
  static MultiChannelAudio robot_layout(size_t length, int rate);
};

// Reads a RIFF/WAVE PCM 16-bit file. Six-channel files are tagged with the
// robot layout; any other channel count gets per-channel Mono roles.
// Throws FormatError on a malformed container, UnsupportedFormatError for
// non-PCM or non-16-bit encodings, IoError if the file cannot be opened.
MultiChannelAudio read_wav(const std::string& path);

// Writes PCM 16-bit little-endian. Values are clamped to [-32768, 32767]
// after scaling by 32768, so a round-trip stays within one quantization step.
void write_wav(const std::string& path, const MultiChannelAudio& audio);

}  // namespace roboaudio
