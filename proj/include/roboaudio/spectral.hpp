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

#include <complex>
#include <cstddef>
#include <vector>

#include "roboaudio/audio.hpp"

namespace roboaudio {

enum class Window { kHann, kRect };

// Complex STFT. No tail padding: the final partial frame is dropped, so
// frames = floor((length - frame_len) / hop) + 1.
struct Spectrogram {
  std::vector<std::complex<double>> bins;  // row-major [frame][freq_bin]
  size_t frames = 0;
  size_t freq_bins = 0;  // frame_len / 2 + 1
  int frame_len = 0;
  int hop = 0;
  Window window = Window::kHann;

  const std::complex<double>& at(size_t frame, size_t bin) const {
    return bins[frame * freq_bins + bin];
  }
};

Spectrogram stft(const std::vector<double>& x, int frame_len, int hop,
                 Window window = Window::kHann);

// Log mel-filterbank energies, [frames x n_mels].
// HTK mel scale, triangular filters spanning 0..sample_rate/2, power floored
// at 1e-10 before the natural log.
struct MelFeatures {
  std::vector<double> values;  // row-major [frame][mel]
  size_t frames = 0;
  int n_mels = 0;
  int frame_len = 0;
  int hop = 0;

  double at(size_t frame, int mel) const { return values[frame * n_mels + mel]; }
};

MelFeatures mel_features(const Spectrogram& spec, int n_mels, int sample_rate = 16000);

// Stacked magnitude + phase planes of the first five channels:
// planes 0..4 are magnitudes, planes 5..9 phases in (-pi, pi].
struct FeatureTensor {
  std::vector<double> values;  // [plane][freq][frame] flattened
  size_t planes = 0;           // 2 * C
  size_t freq_bins = 0;
  size_t frames = 0;

  double at(size_t plane, size_t bin, size_t frame) const {
    return values[(plane * freq_bins + bin) * frames + frame];
  }
  double& at(size_t plane, size_t bin, size_t frame) {
    return values[(plane * freq_bins + bin) * frames + frame];
  }
};

FeatureTensor assemble_ssl_features(const MultiChannelAudio& audio, int frame_len = 512,
                                    int hop = 256);

}  // namespace roboaudio
