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

#include "roboaudio/ssl.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "roboaudio/errors.hpp"

namespace roboaudio {

namespace {

void check_deg(int deg) {
  if (deg < 1 || deg > 360) throw ParamError("azimuth must be in 1..360");
}

void check_set(const AngleSet& s) {
  for (int d : s.degrees) check_deg(d);
}

int min_distance_to(const std::vector<int>& angles, int deg) {
  int best = std::numeric_limits<int>::max();
  for (int a : angles) best = std::min(best, angle_distance(deg, a));
  return best;
}

}  // namespace

double& DoaDistribution::at_deg(int deg) {
  check_deg(deg);
  return values[static_cast<size_t>(deg - 1)];
}

double DoaDistribution::at_deg(int deg) const {
  check_deg(deg);
  return values[static_cast<size_t>(deg - 1)];
}

int DoaDistribution::argmax_deg() const {
  int best = 1;
  for (int deg = 2; deg <= 360; ++deg)
    if (values[static_cast<size_t>(deg - 1)] > values[static_cast<size_t>(best - 1)]) best = deg;
  return best;
}

int angle_distance(int a, int b) {
  check_deg(a);
  check_deg(b);
  const int diff = std::abs(a - b);
  return std::min(diff, 360 - diff);
}

DoaDistribution encode_ssl_target(const AngleSet& speech, const AngleSet& noise, double sigma) {
  if (!(sigma > 0.0)) throw ParamError("sigma must be positive");
  check_set(speech);
  check_set(noise);
  std::vector<int> all = speech.degrees;
  all.insert(all.end(), noise.degrees.begin(), noise.degrees.end());
  if (all.empty()) throw ParamError("no source angles to encode");

  DoaDistribution dist;
  for (int deg = 1; deg <= 360; ++deg) {
    double best = 0.0;
    for (int a : all) {
      const double d = static_cast<double>(angle_distance(deg, a));
      best = std::max(best, std::exp(-d * d / (sigma * sigma)));
    }
    dist.at_deg(deg) = best;
  }
  return dist;
}

DoaDistribution encode_sns_target(const AngleSet& speech, const AngleSet& noise) {
  check_set(speech);
  check_set(noise);
  if (speech.degrees.empty() && noise.degrees.empty())
    throw ParamError("no source angles to encode");

  DoaDistribution dist;
  for (int deg = 1; deg <= 360; ++deg) {
    const int ds = min_distance_to(speech.degrees, deg);
    const int dn = min_distance_to(noise.degrees, deg);
    dist.at_deg(deg) = ds <= dn ? 1.0 : 0.0;  // equidistant counts as speech
  }
  return dist;
}

double ssl_sns_loss(const DoaDistribution& est_ssl, const DoaDistribution& est_sns,
                    const DoaDistribution& tgt_ssl, const DoaDistribution& tgt_sns) {
  double loss = 0.0;
  for (size_t i = 0; i < 360; ++i) {
    const double d1 = tgt_ssl.values[i] - est_ssl.values[i];
    const double d2 = tgt_sns.values[i] - est_sns.values[i];
    loss += d1 * d1 + d2 * d2;
  }
  return loss;
}

int decide_doa(const DoaDistribution& est_ssl, const DoaDistribution& est_sns) {
  double best = 0.0;
  int best_deg = 0;
  bool any_nonzero = false;
  for (int deg = 1; deg <= 360; ++deg) {
    const double ssl = est_ssl.at_deg(deg);
    const double sns = est_sns.at_deg(deg);
    if (!std::isfinite(ssl) || !std::isfinite(sns))
      throw ParamError("decide_doa: non-finite estimate");
    const double p = ssl * sns;
    if (p != 0.0) any_nonzero = true;
    if (best_deg == 0 || p > best) {
      best = p;
      best_deg = deg;
    }
  }
  if (!any_nonzero) throw NoDecisionError("decide_doa: product is identically zero");
  return best_deg;
}

std::string to_csv_line(const DoaDistribution& dist) {
  std::ostringstream os;
  os.precision(17);
  for (size_t i = 0; i < 360; ++i) {
    if (i > 0) os << ',';
    os << dist.values[i];
  }
  return os.str();
}

DoaDistribution doa_distribution_from_csv(const std::string& line) {
  std::vector<std::string> fields;
  size_t pos = 0;
  while (true) {
    const size_t comma = line.find(',', pos);
    fields.push_back(comma == std::string::npos ? line.substr(pos)
                                                : line.substr(pos, comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (fields.size() != 360)
    throw ParseError("expected 360 comma-separated values, got " + std::to_string(fields.size()),
                     1);
  DoaDistribution dist;
  for (size_t i = 0; i < 360; ++i) {
    try {
      size_t consumed = 0;
      dist.values[i] = std::stod(fields[i], &consumed);
      if (consumed != fields[i].size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ParseError("bad distribution field '" + fields[i] + "'", i + 1);
    }
  }
  return dist;
}

}  // namespace roboaudio
