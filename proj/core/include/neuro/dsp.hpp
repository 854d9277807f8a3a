// Copyright 2026 The NeuRO Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NEURO_DSP_HPP_
#define NEURO_DSP_HPP_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace neuro::dsp {

/// In-place iterative radix-2 FFT; size must be a power of two.
void fft(std::span<std::complex<double>> data);

[[nodiscard]] std::size_t next_power_of_two(std::size_t n) noexcept;

/// One-sided power spectrum (fft_size / 2 + 1 bins) of a Hann-windowed
/// frame zero-padded to fft_size.
[[nodiscard]] std::vector<double> power_spectrum(std::span<const float> frame, std::size_t fft_size);

}  // namespace neuro::dsp

#endif  // NEURO_DSP_HPP_
