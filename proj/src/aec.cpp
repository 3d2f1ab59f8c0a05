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

#include "roboaudio/aec.hpp"

#include <algorithm>
#include <cmath>

#include "roboaudio/errors.hpp"

namespace roboaudio {

namespace {
// Forgetting factor for the per-bin reference power estimate.
constexpr double kPsdForget = 0.9;
}  // namespace

void AecConfig::validate() const {
  if (filter_len == 0) throw ParamError("aec: filter_len must be positive");
  if (block_len <= filter_len)
    throw ParamError("aec: block_len must exceed filter_len to leave room for fresh samples");
  if (!(step_size > 0.0) || !(step_size < 2.0)) throw ParamError("aec: step_size must be in (0, 2)");
  if (!(regularization > 0.0)) throw ParamError("aec: regularization must be positive");
}

FlmsAec::FlmsAec(const AecConfig& cfg, size_t n_refs) : cfg_(cfg), n_refs_(n_refs) {
  cfg_.validate();
  if (n_refs_ == 0) throw ParamError("aec: at least one reference required");
  hop_ = cfg_.block_len - cfg_.filter_len;
  const size_t bins = cfg_.block_len / 2 + 1;
  ref_history_.assign(n_refs_, std::vector<double>(cfg_.filter_len, 0.0));
  weights_.assign(n_refs_, std::vector<cdouble>(bins, cdouble(0.0, 0.0)));
  psd_.assign(n_refs_, std::vector<double>(bins, 0.0));
}

void FlmsAec::process_block(const double* mic, const double* const* refs, size_t valid, bool adapt,
                            double* out) {
  const size_t n = cfg_.block_len;
  const size_t filt = cfg_.filter_len;
  const size_t bins = n / 2 + 1;

  // Per-ref overlap-save segment [history | fresh], transformed.
  std::vector<std::vector<cdouble>> spectra(n_refs_);
  std::vector<double> segment(n);
  double ref_energy = 0.0;
  for (size_t r = 0; r < n_refs_; ++r) {
    std::copy(ref_history_[r].begin(), ref_history_[r].end(), segment.begin());
    for (size_t i = 0; i < hop_; ++i) {
      const double v = i < valid ? refs[r][i] : 0.0;
      segment[filt + i] = v;
      ref_energy += v * v;
    }
    if (adapt)
      std::copy(segment.begin() + static_cast<long>(hop_), segment.end(), ref_history_[r].begin());
    spectra[r] = rfft(segment, n);
  }

  // Echo estimate: sum of per-ref filter outputs; valid part is the block tail.
  std::vector<cdouble> y_freq(bins, cdouble(0.0, 0.0));
  for (size_t r = 0; r < n_refs_; ++r)
    for (size_t k = 0; k < bins; ++k) y_freq[k] += spectra[r][k] * weights_[r][k];
  const std::vector<double> y = irfft(y_freq, n);

  std::vector<double> err(hop_, 0.0);
  double e_energy = 0.0, m_energy = 0.0;
  for (size_t i = 0; i < valid; ++i) {
    err[i] = mic[i] - y[filt + i];
    e_energy += err[i] * err[i];
    m_energy += mic[i] * mic[i];
  }

  // Safety bypass on the emitted samples only: never hand downstream more
  // energy than came in. The weights keep adapting below either way, so a
  // transient overshoot corrects itself instead of freezing the filter.
  if (e_energy > m_energy) {
    for (size_t i = 0; i < valid; ++i) out[i] = mic[i];
  } else {
    for (size_t i = 0; i < valid; ++i) out[i] = err[i];
  }

  if (!adapt || ref_energy <= 0.0) return;
  adapted_ = true;
  ++adapt_count_;
  // The exponential power average starts at zero; dividing by 1 - lambda^t
  // removes the startup bias that would otherwise inflate the first steps.
  const double unbias =
      1.0 / (1.0 - std::pow(kPsdForget, static_cast<double>(adapt_count_)));

  std::vector<double> err_padded(n, 0.0);
  std::copy(err.begin(), err.end(), err_padded.begin() + static_cast<long>(filt));
  const std::vector<cdouble> e_freq = rfft(err_padded, n);

  for (size_t r = 0; r < n_refs_; ++r) {
    double psd_mean = 0.0;
    for (size_t k = 0; k < bins; ++k) {
      psd_[r][k] = kPsdForget * psd_[r][k] + (1.0 - kPsdForget) * std::norm(spectra[r][k]);
      psd_mean += psd_[r][k] * unbias;
    }
    psd_mean /= static_cast<double>(bins);
    const double delta = cfg_.regularization * psd_mean + 1e-20;

    std::vector<cdouble> grad(bins);
    for (size_t k = 0; k < bins; ++k)
      grad[k] = cfg_.step_size * std::conj(spectra[r][k]) * e_freq[k] /
                (psd_[r][k] * unbias + delta);

    // Gradient constraint: the update must describe a filter of filter_len taps.
    std::vector<double> g = irfft(grad, n);
    std::fill(g.begin() + static_cast<long>(filt), g.end(), 0.0);
    const std::vector<cdouble> g_freq = rfft(g, n);
    for (size_t k = 0; k < bins; ++k) weights_[r][k] += g_freq[k];
  }
}

std::vector<double> FlmsAec::process(const std::vector<double>& mic,
                                     const std::vector<std::vector<double>>& refs) {
  if (refs.size() != n_refs_) throw ParamError("aec: reference count does not match configuration");
  for (const auto& r : refs)
    if (r.size() != mic.size()) throw ParamError("aec: mic and reference lengths differ");

  std::vector<double> out(mic.size(), 0.0);
  std::vector<const double*> ref_ptrs(n_refs_);

  const size_t full_blocks = mic.size() / hop_;
  for (size_t b = 0; b < full_blocks; ++b) {
    const size_t off = b * hop_;
    for (size_t r = 0; r < n_refs_; ++r) ref_ptrs[r] = refs[r].data() + off;
    process_block(mic.data() + off, ref_ptrs.data(), hop_, /*adapt=*/true, out.data() + off);
  }
  const size_t tail = mic.size() % hop_;
  if (tail > 0) {
    const size_t off = full_blocks * hop_;
    for (size_t r = 0; r < n_refs_; ++r) ref_ptrs[r] = refs[r].data() + off;
    process_block(mic.data() + off, ref_ptrs.data(), tail, /*adapt=*/false, out.data() + off);
  }
  return out;
}

AecResult flms_aec(const std::vector<double>& mic, const std::vector<std::vector<double>>& refs,
                   const AecConfig& cfg) {
  FlmsAec aec(cfg, refs.size());
  AecResult result;
  result.output = aec.process(mic, refs);
  result.adapted = aec.adapted();
  return result;
}

}  // namespace roboaudio
