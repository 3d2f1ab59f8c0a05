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

#include "roboaudio/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "roboaudio/errors.hpp"
#include "roboaudio/ssl.hpp"

namespace roboaudio {

KwsScore kws_metrics(const std::vector<bool>& truth_has_keyword,
                     const std::vector<bool>& predicted) {
  if (truth_has_keyword.size() != predicted.size())
    throw ParamError("kws_metrics: truth and prediction lengths differ");

  KwsScore s;
  for (size_t i = 0; i < truth_has_keyword.size(); ++i) {
    if (truth_has_keyword[i]) {
      ++s.n_key;
      if (!predicted[i]) ++s.n_fr;
    } else {
      ++s.n_nonkey;
      if (predicted[i]) ++s.n_fa;
    }
  }
  if (s.n_key == 0) throw UndefinedMetricError("kws_metrics: no keyword examples");
  if (s.n_nonkey == 0) throw UndefinedMetricError("kws_metrics: no non-keyword examples");
  s.frr = static_cast<double>(s.n_fr) / static_cast<double>(s.n_key);
  s.far = static_cast<double>(s.n_fa) / static_cast<double>(s.n_nonkey);
  s.score = s.frr + s.far;
  return s;
}

SslScore ssl_metrics(const std::vector<int>& truth_deg, const std::vector<int>& predicted_deg,
                     double mae_baseline) {
  if (truth_deg.size() != predicted_deg.size())
    throw ParamError("ssl_metrics: truth and prediction lengths differ");
  if (truth_deg.empty()) throw ParamError("ssl_metrics: no examples");
  if (!(mae_baseline > 0.0)) throw ParamError("ssl_metrics: mae_baseline must be positive");

  SslScore s;
  s.mae_baseline = mae_baseline;
  s.errors.reserve(truth_deg.size());
  size_t within10 = 0, within7_5 = 0, within5 = 0;
  double err_sum = 0.0;
  for (size_t i = 0; i < truth_deg.size(); ++i) {
    const int e = angle_distance(truth_deg[i], predicted_deg[i]);
    s.errors.push_back(e);
    err_sum += e;
    if (e <= 10) ++within10;
    if (e <= 7.5) ++within7_5;
    if (e <= 5) ++within5;
  }
  const double n = static_cast<double>(truth_deg.size());
  s.mae = err_sum / n;
  s.acc10 = static_cast<double>(within10) / n;
  s.acc7_5 = static_cast<double>(within7_5) / n;
  s.acc5 = static_cast<double>(within5) / n;
  s.score = 0.3 * s.acc10 + 0.35 * s.acc7_5 + 0.35 * s.acc5 + (1.0 - s.mae / mae_baseline);
  return s;
}

std::vector<size_t> rank_systems(const std::vector<RankEntry>& entries, RankDirection direction) {
  for (const auto& e : entries)
    if (!std::isfinite(e.score)) throw ParamError("rank_systems: non-finite score");

  std::vector<size_t> order(entries.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (entries[a].score != entries[b].score) {
      return direction == RankDirection::kAscending ? entries[a].score < entries[b].score
                                                    : entries[a].score > entries[b].score;
    }
    return entries[a].time_delay_ms < entries[b].time_delay_ms;
  });
  return order;
}

double lr_at_step(double lr0, double lr_final, size_t total_steps, size_t j) {
  if (!(lr0 > 0.0) || !(lr_final > 0.0)) throw ParamError("lr_at_step: rates must be positive");
  if (total_steps < 2) throw ParamError("lr_at_step: need at least two steps");
  if (j > total_steps - 1) throw ParamError("lr_at_step: step index out of range");
  const double frac = static_cast<double>(j) / static_cast<double>(total_steps - 1);
  return lr0 * std::exp(frac * std::log(lr_final / lr0));
}

}  // namespace roboaudio
