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

#include <complex>
#include <cstddef>
#include <vector>

namespace roboaudio {

using cdouble = std::complex<double>;

// In-place DFT of arbitrary length (radix-2 for powers of two, Bluestein
// otherwise). ifft applies the 1/N scaling.
void fft(std::vector<cdouble>& data);
void ifft(std::vector<cdouble>& data);

size_t next_pow2(size_t n);

// Real-input FFT of length nfft (x zero-padded or truncated to nfft).
// Returns the nfft/2 + 1 non-redundant bins.
std::vector<cdouble> rfft(const std::vector<double>& x, size_t nfft);

// Inverse of rfft for even nfft; returns nfft real samples.
std::vector<double> irfft(const std::vector<cdouble>& half, size_t nfft);

// Full linear convolution, length a.size() + b.size() - 1.
std::vector<double> fft_convolve(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace roboaudio
