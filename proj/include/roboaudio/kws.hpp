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

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace roboaudio {

// Per-frame keyword posterior probabilities, each in [0, 1].
struct PosteriorTrack {
  std::vector<double> keyword_prob;
  double frame_hop_ms = 10.0;

  void validate() const;
};

struct KwsDecision {
  bool detected = false;
  std::optional<size_t> trigger_frame;  // first frame whose confidence crossed
  double peak_confidence = 0.0;
};

// Causal moving average: frame t averages the raw posteriors over the last
// w_smooth frames (fewer at the start of the track).
PosteriorTrack smooth_posteriors(const PosteriorTrack& track, size_t w_smooth);

// Smooth, then fire on the first frame whose smoothed posterior strictly
// exceeds the threshold (1.0 is accepted and can never fire). Decision at
// frame t depends only on frames <= t.
KwsDecision decide_keyword(const PosteriorTrack& track, size_t w_smooth = 30,
                           double threshold = 0.5);

// Posterior file: optional "#hop_ms=<real>" header, then one probability per
// line. Throws ParseError (with line number) on malformed or out-of-range
// values; an empty file is an empty track.
PosteriorTrack read_posterior_file(const std::string& path);
void write_posterior_file(const std::string& path, const PosteriorTrack& track);

// Demo pseudo-posteriors from frame energy (no acoustic model involved):
// p_t = e_t / (e_t + mean frame energy). Hands end-to-end runs something to
// threshold; not a substitute for a trained keyword spotter.
PosteriorTrack energy_gate_posteriors(const std::vector<double>& x, int sample_rate = 16000,
                                      size_t frame_len = 400, size_t hop = 160);

}  // namespace roboaudio
