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
#include <string>
#include <vector>

namespace roboaudio {

// Probability-like vector over integer azimuths 1..360 (stored at index
// degree - 1). Targets live in [0, 1]; estimates only need to be finite.
struct DoaDistribution {
  std::array<double, 360> values{};

  double& at_deg(int deg);
  double at_deg(int deg) const;

  // Largest value's azimuth; exact ties resolve to the smallest azimuth.
  int argmax_deg() const;
};

enum class AngleRole { kSpeech, kNoise };

struct AngleSet {
  std::vector<int> degrees;  // each in 1..360
  AngleRole role = AngleRole::kSpeech;
};

// Circular distance between integer azimuths, in 0..180.
int angle_distance(int a, int b);

// Gaussian localization target: p_i = max over source angles of
// exp(-d(i, angle)^2 / sigma^2). The union of speech and noise angles must be
// nonempty. Default sigma is 45 degrees.
DoaDistribution encode_ssl_target(const AngleSet& speech, const AngleSet& noise,
                                  double sigma = 45.0);

// Speech/non-speech target: p_i = 1 iff the source angle nearest to azimuth i
// is a speech angle; equidistant ties count as speech.
DoaDistribution encode_sns_target(const AngleSet& speech, const AngleSet& noise);

// Multi-task objective: squared 2-norm of both head errors, summed over bins.
double ssl_sns_loss(const DoaDistribution& est_ssl, const DoaDistribution& est_sns,
                    const DoaDistribution& tgt_ssl, const DoaDistribution& tgt_sns);

// Final localization decision: argmax of the elementwise product, smallest
// azimuth on ties. Throws NoDecisionError when the product is identically
// zero (no direction carries speech evidence).
int decide_doa(const DoaDistribution& est_ssl, const DoaDistribution& est_sns);

// One line of 360 comma-separated reals, and its inverse.
std::string to_csv_line(const DoaDistribution& dist);
DoaDistribution doa_distribution_from_csv(const std::string& line);

}  // namespace roboaudio
