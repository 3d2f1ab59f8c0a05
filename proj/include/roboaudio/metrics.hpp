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

namespace roboaudio {

struct KwsScore {
  size_t n_key = 0;     // keyword examples
  size_t n_nonkey = 0;  // non-keyword examples
  size_t n_fr = 0;      // false rejects
  size_t n_fa = 0;      // false alarms
  double frr = 0.0;
  double far = 0.0;
  double score = 0.0;  // frr + far, lower is better
};

struct SslScore {
  std::vector<int> errors;  // per-example circular angle error, degrees
  double mae = 0.0;
  double acc10 = 0.0;
  double acc7_5 = 0.0;
  double acc5 = 0.0;
  double mae_baseline = 0.0;
  double score = 0.0;  // higher is better, maximum 2
};

// FRR = false rejects / keyword examples, FAR = false alarms / non-keyword
// examples, score = FRR + FAR. Throws UndefinedMetricError unless both
// classes are represented.
KwsScore kws_metrics(const std::vector<bool>& truth_has_keyword,
                     const std::vector<bool>& predicted);

// Circular angular errors against integer-degree ground truth:
// MAE = mean error, ACC_d = fraction with error <= d for d in {10, 7.5, 5},
// score = 0.3*ACC10 + 0.35*ACC7.5 + 0.35*ACC5 + (1 - MAE/MAE_baseline).
SslScore ssl_metrics(const std::vector<int>& truth_deg, const std::vector<int>& predicted_deg,
                     double mae_baseline);

struct RankEntry {
  double score = 0.0;
  double time_delay_ms = 0.0;
};

enum class RankDirection {
  kAscending,   // lower score ranks first (KWS)
  kDescending,  // higher score ranks first (SSL)
};

// Returns entry indices best-first. Exact score ties order by ascending time
// delay; remaining ties keep submission (input) order.
std::vector<size_t> rank_systems(const std::vector<RankEntry>& entries, RankDirection direction);

// Exponential learning-rate decay from lr0 (step 0) to lr_final (step S-1):
// lr_j = lr0 * exp(j/(S-1) * log(lr_final/lr0)).
double lr_at_step(double lr0, double lr_final, size_t total_steps, size_t j);

}  // namespace roboaudio
