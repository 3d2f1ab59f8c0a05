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

#include "roboaudio/fft.hpp"

#include <cmath>
#include <numbers>

#include "roboaudio/errors.hpp"

namespace roboaudio {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_pow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative Cooley-Tukey, n must be a power of two. sign = -1 forward.
void fft_pow2(std::vector<cdouble>& a, int sign) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * kPi / static_cast<double>(len);
    const cdouble wlen(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      cdouble w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        cdouble u = a[i + k];
        cdouble v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

// Bluestein chirp-z transform for arbitrary n, forward direction.
// Exponents are reduced mod 2n so the chirp stays accurate for large k^2.
void fft_bluestein(std::vector<cdouble>& a, int sign) {
  const size_t n = a.size();
  const size_t m = next_pow2(2 * n - 1);
  std::vector<cdouble> chirp(n);
  for (size_t k = 0; k < n; ++k) {
    uint64_t k2 = (static_cast<uint64_t>(k) * k) % (2 * n);
    double ang = sign * kPi * static_cast<double>(k2) / static_cast<double>(n);
    chirp[k] = cdouble(std::cos(ang), std::sin(ang));
  }
  std::vector<cdouble> fa(m, cdouble(0.0, 0.0));
  std::vector<cdouble> fb(m, cdouble(0.0, 0.0));
  for (size_t k = 0; k < n; ++k) fa[k] = a[k] * chirp[k];
  fb[0] = std::conj(chirp[0]);
  for (size_t k = 1; k < n; ++k) fb[k] = fb[m - k] = std::conj(chirp[k]);
  fft_pow2(fa, -1);
  fft_pow2(fb, -1);
  for (size_t k = 0; k < m; ++k) fa[k] *= fb[k];
  fft_pow2(fa, +1);
  const double inv_m = 1.0 / static_cast<double>(m);
  for (size_t k = 0; k < n; ++k) a[k] = fa[k] * inv_m * chirp[k];
}

void fft_any(std::vector<cdouble>& a, int sign) {
  if (a.empty()) return;
  if (is_pow2(a.size())) {
    fft_pow2(a, sign);
  } else {
    fft_bluestein(a, sign);
  }
}

}  // namespace

void fft(std::vector<cdouble>& data) { fft_any(data, -1); }

void ifft(std::vector<cdouble>& data) {
  fft_any(data, +1);
  const double inv_n = data.empty() ? 0.0 : 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v *= inv_n;
}

size_t next_pow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<cdouble> rfft(const std::vector<double>& x, size_t nfft) {
  if (nfft == 0) throw ParamError("rfft: nfft must be positive");
  std::vector<cdouble> buf(nfft, cdouble(0.0, 0.0));
  const size_t n = std::min(x.size(), nfft);
  for (size_t i = 0; i < n; ++i) buf[i] = cdouble(x[i], 0.0);
  fft(buf);
  buf.resize(nfft / 2 + 1);
  return buf;
}

std::vector<double> irfft(const std::vector<cdouble>& half, size_t nfft) {
  if (nfft == 0 || nfft % 2 != 0) throw ParamError("irfft: nfft must be positive and even");
  if (half.size() != nfft / 2 + 1) throw ParamError("irfft: spectrum size mismatch");
  std::vector<cdouble> buf(nfft);
  for (size_t k = 0; k <= nfft / 2; ++k) buf[k] = half[k];
  for (size_t k = nfft / 2 + 1; k < nfft; ++k) buf[k] = std::conj(half[nfft - k]);
  ifft(buf);
  std::vector<double> out(nfft);
  for (size_t i = 0; i < nfft; ++i) out[i] = buf[i].real();
  return out;
}

std::vector<double> fft_convolve(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  const size_t out_len = a.size() + b.size() - 1;
  const size_t nfft = next_pow2(out_len);
  std::vector<cdouble> fa = rfft(a, nfft);
  std::vector<cdouble> fb = rfft(b, nfft);
  for (size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
  std::vector<double> full = irfft(fa, nfft);
  full.resize(out_len);
  return full;
}

}  // namespace roboaudio
