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

#include "roboaudio/doa.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "roboaudio/errors.hpp"
#include "roboaudio/fft.hpp"

namespace roboaudio {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPhatFloor = 1e-12;

bool all_zero(const std::vector<double>& x) {
  for (double v : x)
    if (v != 0.0) return false;
  return true;
}

// Whitened cross spectrum of a against b on an FFT grid long enough that
// lags within +-max_lag are free of circular wrap.
std::vector<cdouble> whitened_cross_spectrum(const std::vector<double>& a,
                                             const std::vector<double>& b, int max_lag,
                                             size_t* nfft_out) {
  if (a.size() != b.size()) throw ParamError("gcc_phat: signals must have equal length");
  if (max_lag < 0) throw ParamError("gcc_phat: max_lag must be non-negative");
  if (a.size() < 2 * static_cast<size_t>(max_lag))
    throw ParamError("gcc_phat: signals shorter than twice max_lag");
  if (all_zero(a) || all_zero(b))
    throw DegenerateSignalError("gcc_phat: zero signal, whitening undefined");

  const size_t nfft = next_pow2(a.size() + static_cast<size_t>(max_lag) + 1);
  const std::vector<cdouble> fa = rfft(a, nfft);
  const std::vector<cdouble> fb = rfft(b, nfft);
  std::vector<cdouble> cross(fa.size());
  for (size_t k = 0; k < fa.size(); ++k) {
    const cdouble x = fa[k] * std::conj(fb[k]);
    cross[k] = x / std::max(std::abs(x), kPhatFloor);
  }
  *nfft_out = nfft;
  return cross;
}

// Evaluates the inverse transform of a half spectrum at a real-valued lag.
// Equivalent to irfft followed by band-limited interpolation, but exact.
double eval_at_lag(const std::vector<cdouble>& half, size_t nfft, double lag) {
  const double step_angle = 2.0 * kPi * lag / static_cast<double>(nfft);
  const cdouble rot(std::cos(step_angle), std::sin(step_angle));
  cdouble phase(1.0, 0.0);
  double acc = half[0].real();
  const size_t bins = half.size();
  for (size_t k = 1; k + 1 < bins; ++k) {
    phase *= rot;
    acc += 2.0 * (half[k] * phase).real();
  }
  phase *= rot;
  acc += (half[bins - 1] * phase).real();  // Nyquist bin appears once
  return acc / static_cast<double>(nfft);
}

Vec3 unit_toward(int deg) {
  const double rad = static_cast<double>(deg) * kPi / 180.0;
  return Vec3{std::cos(rad), std::sin(rad), 0.0};
}

}  // namespace

double CrossCorr::at_lag(int lag) const {
  if (lag < -max_lag || lag > max_lag) throw ParamError("lag outside correlation range");
  return values[static_cast<size_t>(lag + max_lag)];
}

int CrossCorr::argmax_lag() const {
  size_t best = 0;
  for (size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return static_cast<int>(best) - max_lag;
}

CrossCorr gcc_phat(const std::vector<double>& a, const std::vector<double>& b, int max_lag) {
  size_t nfft = 0;
  const std::vector<cdouble> cross = whitened_cross_spectrum(a, b, max_lag, &nfft);
  const std::vector<double> corr = irfft(cross, nfft);

  CrossCorr out;
  out.max_lag = max_lag;
  out.values.resize(2 * static_cast<size_t>(max_lag) + 1);
  for (int lag = -max_lag; lag <= max_lag; ++lag) {
    const size_t idx = lag >= 0 ? static_cast<size_t>(lag) : nfft - static_cast<size_t>(-lag);
    out.values[static_cast<size_t>(lag + max_lag)] = corr[idx];
  }
  return out;
}

SteeringGrid SteeringGrid::for_device(const DeviceGeometry& device, double speed_of_sound) {
  if (!(speed_of_sound > 0.0)) throw ParamError("speed_of_sound must be positive");
  SteeringGrid grid;
  size_t p = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) grid.pairs[p++] = {i, j};

  // Plane wave from azimuth theta travels along -u(theta); a mic displaced by
  // r hears it r.u/c early. TDOA(i, j) = t_i - t_j = ((r_j - r_i).u)/c.
  for (int deg = 1; deg <= 360; ++deg) {
    const Vec3 u = unit_toward(deg);
    for (p = 0; p < kPairs; ++p) {
      const Vec3 ri = device.mic_offset_device(grid.pairs[p].first);
      const Vec3 rj = device.mic_offset_device(grid.pairs[p].second);
      const double proj = (rj[0] - ri[0]) * u[0] + (rj[1] - ri[1]) * u[1] + (rj[2] - ri[2]) * u[2];
      grid.tdoa_s[p][static_cast<size_t>(deg - 1)] = proj / speed_of_sound;
    }
  }
  return grid;
}

DoaDistribution srp_phat_doa(const std::vector<std::vector<double>>& mics,
                             const DeviceGeometry& /*device*/, const SteeringGrid& grid,
                             const SrpOptions& options) {
  // The grid already encodes the device-frame geometry; the device argument
  // keeps call sites explicit about which array the channels came from.
  if (mics.size() != 4) throw ParamError("srp_phat_doa: expected 4 microphone channels");
  const size_t len = mics[0].size();
  for (const auto& m : mics)
    if (m.size() != len) throw ParamError("srp_phat_doa: channel lengths differ");
  if (options.sample_rate <= 0) throw ParamError("srp_phat_doa: sample_rate must be positive");
  const double fs = static_cast<double>(options.sample_rate);

  DoaDistribution dist;
  if (options.subsample) {
    // Keep the whitened spectra and evaluate each pair at exact lags.
    std::array<std::vector<cdouble>, SteeringGrid::kPairs> spectra;
    size_t nfft = 0;
    for (size_t p = 0; p < SteeringGrid::kPairs; ++p)
      spectra[p] = whitened_cross_spectrum(mics[static_cast<size_t>(grid.pairs[p].first)],
                                           mics[static_cast<size_t>(grid.pairs[p].second)],
                                           options.max_lag, &nfft);
    for (int deg = 1; deg <= 360; ++deg) {
      double score = 0.0;
      for (size_t p = 0; p < SteeringGrid::kPairs; ++p)
        score += eval_at_lag(spectra[p], nfft, grid.tdoa_s[p][static_cast<size_t>(deg - 1)] * fs);
      dist.at_deg(deg) = score;
    }
  } else {
    std::array<CrossCorr, SteeringGrid::kPairs> corrs;
    for (size_t p = 0; p < SteeringGrid::kPairs; ++p)
      corrs[p] = gcc_phat(mics[static_cast<size_t>(grid.pairs[p].first)],
                          mics[static_cast<size_t>(grid.pairs[p].second)], options.max_lag);
    for (int deg = 1; deg <= 360; ++deg) {
      double score = 0.0;
      for (size_t p = 0; p < SteeringGrid::kPairs; ++p) {
        const int lag =
            static_cast<int>(std::lround(grid.tdoa_s[p][static_cast<size_t>(deg - 1)] * fs));
        score += corrs[p].at_lag(lag);
      }
      dist.at_deg(deg) = score;
    }
  }

  // Clamp to a probability-like profile.
  double total = 0.0;
  for (double& v : dist.values) {
    v = std::max(v, 0.0);
    total += v;
  }
  if (total > 0.0) {
    for (double& v : dist.values) v /= total;
  } else {
    for (double& v : dist.values) v = 1.0 / 360.0;
  }
  return dist;
}

std::vector<double> dsbf(const std::vector<std::vector<double>>& mics,
                         const DeviceGeometry& device, int doa_deg, int sample_rate,
                         double speed_of_sound) {
  if (mics.size() != 4) throw ParamError("dsbf: expected 4 microphone channels");
  if (doa_deg < 1 || doa_deg > 360) throw ParamError("dsbf: azimuth must be in 1..360");
  if (sample_rate <= 0) throw ParamError("dsbf: sample_rate must be positive");
  const size_t len = mics[0].size();
  for (const auto& m : mics)
    if (m.size() != len) throw ParamError("dsbf: channel lengths differ");

  const Vec3 u = unit_toward(doa_deg);
  std::vector<double> out(len, 0.0);
  for (int m = 0; m < 4; ++m) {
    const Vec3 r = device.mic_offset_device(m);
    // Arrival delay relative to the array center is -(r.u)/c; advancing the
    // channel by that amount re-aligns it with the center.
    const double delay_s = -(r[0] * u[0] + r[1] * u[1] + r[2] * u[2]) / speed_of_sound;
    const long shift = std::lround(delay_s * sample_rate);
    for (size_t n = 0; n < len; ++n) {
      const long src = static_cast<long>(n) + shift;
      if (src >= 0 && src < static_cast<long>(len))
        out[n] += mics[static_cast<size_t>(m)][static_cast<size_t>(src)];
    }
  }
  for (double& v : out) v *= 0.25;
  return out;
}

}  // namespace roboaudio
