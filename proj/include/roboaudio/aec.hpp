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
#include <vector>

#include "roboaudio/fft.hpp"

namespace roboaudio {

// Frequency-domain block LMS echo canceller configuration. The block is a
// 2x overlap-save window by default: filter_len adaptive taps, block_len-size
// FFTs, and block_len - filter_len fresh samples per block.
struct AecConfig {
  size_t filter_len = 4096;  // 256 ms at 16 kHz
  size_t block_len = 8192;
  double step_size = 0.5;          // normalized NLMS step, must be in (0, 2)
  double regularization = 1e-6;    // scaled by the mean reference power

  void validate() const;
};

struct AecResult {
  std::vector<double> output;
  // False when the references carried no energy and the input passed through.
  bool adapted = true;
};

// Streaming FLMS echo canceller: one adaptive filter per reference, outputs
// summed, overlap-save processing with a gradient constraint. Instances carry
// adaptation state, so use one per stream; distinct instances are
// independent. A block whose residual would exceed the microphone energy is
// bypassed (echo cancellation never adds more than 3 dB by construction).
class FlmsAec {
 public:
  FlmsAec(const AecConfig& cfg, size_t n_refs);

  // Processes full signals, carrying filter state across calls. refs.size()
  // must equal n_refs and every signal must have mic.size() samples. A tail
  // shorter than one hop is filtered without adaptation, so feed hop-multiple
  // lengths when exact streaming continuity across calls matters.
  std::vector<double> process(const std::vector<double>& mic,
                              const std::vector<std::vector<double>>& refs);

  bool adapted() const { return adapted_; }

 private:
  void process_block(const double* mic, const double* const* refs, size_t valid, bool adapt,
                     double* out);

  AecConfig cfg_;
  size_t n_refs_;
  size_t hop_;  // fresh samples per block = block_len - filter_len
  std::vector<std::vector<double>> ref_history_;  // last filter_len samples per ref
  std::vector<std::vector<cdouble>> weights_;     // per-ref frequency-domain filter
  std::vector<std::vector<double>> psd_;          // per-ref per-bin smoothed power
  size_t adapt_count_ = 0;  // adapted blocks, drives the psd bias correction
  bool adapted_ = false;
};

// One-shot convenience wrapper over FlmsAec.
AecResult flms_aec(const std::vector<double>& mic, const std::vector<std::vector<double>>& refs,
                   const AecConfig& cfg);

}  // namespace roboaudio
