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

#include <array>
#include <cstddef>
#include <vector>

#include "roboaudio/room.hpp"
#include "roboaudio/ssl.hpp"

namespace roboaudio {

// Cross-correlation values over lags -max_lag..+max_lag; index 0 holds the
// most negative lag. With b a copy of a delayed by k samples, the peak sits
// at lag -k.
struct CrossCorr {
  std::vector<double> values;
  int max_lag = 0;

  double at_lag(int lag) const;
  int argmax_lag() const;  // ties resolve to the most negative lag
};

// Phase-transform-whitened cross-correlation of a against b, restricted to
// the requested lag range. Throws DegenerateSignalError when either signal is
// identically zero (whitening undefined).
CrossCorr gcc_phat(const std::vector<double>& a, const std::vector<double>& b, int max_lag);

// Expected per-pair TDOAs (seconds) for every integer azimuth 1..360 under a
// far-field plane-wave model in the device frame (90 degrees = straight
// ahead). Pair order: (0,1), (0,2), (0,3), (1,2), (1,3), (2,3); the TDOA is
// the arrival time at the first mic minus the arrival time at the second.
struct SteeringGrid {
  static constexpr size_t kPairs = 6;
  std::array<std::array<double, 360>, kPairs> tdoa_s{};
  std::array<std::pair<int, int>, kPairs> pairs{};

  static SteeringGrid for_device(const DeviceGeometry& device, double speed_of_sound = 343.0);
};

struct SrpOptions {
  // Evaluate the whitened cross-spectra at exact fractional TDOAs. The array
  // aperture spans only a couple of samples at 16 kHz, so nearest-lag lookup
  // plateaus over wide azimuth ranges; fractional evaluation resolves them.
  bool subsample = true;
  int max_lag = 8;
  int sample_rate = 16000;
};

// Steered-response power over azimuths 1..360: per azimuth, the six mic-pair
// GCC-PHAT responses at that azimuth's expected TDOAs are summed. Scores are
// floored at zero and normalized to sum 1 (uniform if everything is
// non-positive). Estimated DOA = argmax (smallest azimuth on ties).
DoaDistribution srp_phat_doa(const std::vector<std::vector<double>>& mics,
                             const DeviceGeometry& device, const SteeringGrid& grid,
                             const SrpOptions& options = {});

// Delay-and-sum beamformer: each channel is advanced by its integer-rounded
// plane-wave delay for the given azimuth, then the four channels are
// averaged. Unit gain toward the steered direction.
std::vector<double> dsbf(const std::vector<std::vector<double>>& mics,
                         const DeviceGeometry& device, int doa_deg, int sample_rate = 16000,
                         double speed_of_sound = 343.0);

}  // namespace roboaudio
