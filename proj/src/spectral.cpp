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

#include "roboaudio/spectral.hpp"

#include <cmath>
#include <numbers>

#include "roboaudio/errors.hpp"
#include "roboaudio/fft.hpp"

namespace roboaudio {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLogFloor = 1e-10;  // power floor before the log

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

std::vector<double> make_window(Window window, int frame_len) {
  std::vector<double> w(frame_len, 1.0);
  if (window == Window::kHann) {
    for (int i = 0; i < frame_len; ++i)
      w[i] = 0.5 * (1.0 - std::cos(2.0 * kPi * i / frame_len));
  }
  return w;
}

}  // namespace

Spectrogram stft(const std::vector<double>& x, int frame_len, int hop, Window window) {
  if (frame_len <= 0 || hop <= 0) throw ParamError("stft: frame_len and hop must be positive");
  if (frame_len % 2 != 0) throw ParamError("stft: frame_len must be even");
  if (x.size() < static_cast<size_t>(frame_len))
    throw ParamError("stft: signal shorter than one frame");

  Spectrogram spec;
  spec.frame_len = frame_len;
  spec.hop = hop;
  spec.window = window;
  spec.frames = (x.size() - frame_len) / hop + 1;
  spec.freq_bins = static_cast<size_t>(frame_len) / 2 + 1;
  spec.bins.resize(spec.frames * spec.freq_bins);

  const std::vector<double> w = make_window(window, frame_len);
  std::vector<cdouble> buf(frame_len);
  for (size_t t = 0; t < spec.frames; ++t) {
    const size_t start = t * hop;
    for (int i = 0; i < frame_len; ++i)
      buf[i] = cdouble(x[start + i] * w[i], 0.0);
    fft(buf);
    for (size_t k = 0; k < spec.freq_bins; ++k) spec.bins[t * spec.freq_bins + k] = buf[k];
  }
  return spec;
}

MelFeatures mel_features(const Spectrogram& spec, int n_mels, int sample_rate) {
  if (n_mels < 1) throw ParamError("mel_features: n_mels must be >= 1");
  if (spec.frames == 0 || spec.freq_bins == 0) throw ParamError("mel_features: empty spectrogram");
  if (static_cast<size_t>(n_mels) > spec.freq_bins)
    throw ParamError("mel_features: n_mels exceeds frequency bin count");
  if (sample_rate <= 0) throw ParamError("mel_features: sample_rate must be positive");

  // Triangular filters on mel-equispaced edges over 0..Nyquist, weights
  // evaluated at exact bin frequencies.
  const double mel_lo = hz_to_mel(0.0);
  const double mel_hi = hz_to_mel(sample_rate / 2.0);
  std::vector<double> edges_hz(n_mels + 2);
  for (int m = 0; m < n_mels + 2; ++m)
    edges_hz[m] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * m / (n_mels + 1));

  const double bin_hz = static_cast<double>(sample_rate) / spec.frame_len;
  std::vector<std::vector<double>> filters(n_mels, std::vector<double>(spec.freq_bins, 0.0));
  for (int m = 0; m < n_mels; ++m) {
    const double left = edges_hz[m], center = edges_hz[m + 1], right = edges_hz[m + 2];
    for (size_t k = 0; k < spec.freq_bins; ++k) {
      const double f = k * bin_hz;
      if (f > left && f < center) {
        filters[m][k] = (f - left) / (center - left);
      } else if (f >= center && f < right) {
        filters[m][k] = (right - f) / (right - center);
      }
    }
  }

  MelFeatures mel;
  mel.frames = spec.frames;
  mel.n_mels = n_mels;
  mel.frame_len = spec.frame_len;
  mel.hop = spec.hop;
  mel.values.resize(spec.frames * n_mels);
  std::vector<double> power(spec.freq_bins);
  for (size_t t = 0; t < spec.frames; ++t) {
    for (size_t k = 0; k < spec.freq_bins; ++k) power[k] = std::norm(spec.at(t, k));
    for (int m = 0; m < n_mels; ++m) {
      double acc = 0.0;
      const auto& filt = filters[m];
      for (size_t k = 0; k < spec.freq_bins; ++k) acc += filt[k] * power[k];
      mel.values[t * n_mels + m] = std::log(std::max(acc, kLogFloor));
    }
  }
  return mel;
}

FeatureTensor assemble_ssl_features(const MultiChannelAudio& audio, int frame_len, int hop) {
  constexpr size_t kChannels = 5;
  if (audio.channels() < kChannels)
    throw ParamError("assemble_ssl_features: need at least 5 channels");

  FeatureTensor tensor;
  for (size_t c = 0; c < kChannels; ++c) {
    Spectrogram spec = stft(audio.samples[c], frame_len, hop);
    if (c == 0) {
      tensor.planes = 2 * kChannels;
      tensor.freq_bins = spec.freq_bins;
      tensor.frames = spec.frames;
      tensor.values.assign(tensor.planes * tensor.freq_bins * tensor.frames, 0.0);
    }
    for (size_t k = 0; k < spec.freq_bins; ++k) {
      for (size_t t = 0; t < spec.frames; ++t) {
        const std::complex<double> v = spec.at(t, k);
        double phase = std::arg(v);     // [-pi, pi]
        if (phase <= -kPi) phase = kPi; // keep phases in (-pi, pi]
        tensor.at(c, k, t) = std::abs(v);
        tensor.at(kChannels + c, k, t) = phase;
      }
    }
  }
  return tensor;
}

}  // namespace roboaudio
