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
//
// Shared helpers for the unit tests: scratch directories and small
// independent numeric oracles.

#pragma once

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace testutil {

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<uint64_t> counter{0};
    const auto base = std::filesystem::temp_directory_path();
    path_ = base / ("roboaudio_test_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

inline double mean_square(const std::vector<double>& x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return x.empty() ? 0.0 : acc / static_cast<double>(x.size());
}

inline double db_ratio(double p_num, double p_den) { return 10.0 * std::log10(p_num / p_den); }

// O(N^2) reference DFT, the oracle for all FFT-based code.
inline std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& x) {
  const size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  const double w = -2.0 * M_PI / static_cast<double>(n);
  for (size_t k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (size_t t = 0; t < n; ++t)
      acc += x[t] * std::complex<double>(std::cos(w * static_cast<double>(k * t)),
                                         std::sin(w * static_cast<double>(k * t)));
    out[k] = acc;
  }
  return out;
}

// Deterministic white noise; std::mt19937 keeps the tests independent of the
// library's own Rng.
inline std::vector<double> white_noise(size_t n, uint32_t seed, double amplitude = 1.0) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist(0.0, amplitude);
  std::vector<double> x(n);
  for (double& v : x) v = dist(gen);
  return x;
}

// Backward-integration decay-time estimate: linear fit of the energy decay
// curve (dB) over the -5..-25 dB span, extrapolated to -60 dB.
inline double schroeder_t60(const std::vector<double>& h, double fs) {
  std::vector<double> edc(h.size());
  double acc = 0.0;
  for (size_t i = h.size(); i-- > 0;) {
    acc += h[i] * h[i];
    edc[i] = acc;
  }
  const double e0 = edc.empty() ? 0.0 : edc[0];
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  size_t n = 0;
  for (size_t i = 0; i < edc.size(); ++i) {
    const double level = 10.0 * std::log10(edc[i] / e0 + 1e-300);
    if (level > -5.0 || level < -25.0) continue;
    const double t = static_cast<double>(i) / fs;
    sx += t;
    sy += level;
    sxx += t * t;
    sxy += t * level;
    ++n;
  }
  const double denom = static_cast<double>(n) * sxx - sx * sx;
  if (n < 2 || denom == 0.0) return 0.0;
  const double slope = (static_cast<double>(n) * sxy - sx * sy) / denom;  // dB per second
  return slope < 0.0 ? -60.0 / slope : 0.0;
}

}  // namespace testutil
