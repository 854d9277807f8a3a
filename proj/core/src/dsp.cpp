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

#include "neuro/dsp.hpp"

#include "neuro/error.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace neuro::dsp {

std::size_t next_power_of_two(std::size_t n) noexcept {
    return n <= 1 ? 1 : std::bit_ceil(n);
}

void fft(std::span<std::complex<double>> data) {
    const std::size_t n = data.size();
    if (n == 0 || !std::has_single_bit(n)) {
        throw error{ error_code::invalid_argument, "fft size must be a power of two" };
    }
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1U;
        for (; (j & bit) != 0; bit >>= 1U) {
            j ^= bit;
        }
        j ^= bit;
        if (i < j) {
            std::swap(data[i], data[j]);
        }
    }
    for (std::size_t len = 2; len <= n; len <<= 1U) {
        const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> w_len{ std::cos(angle), std::sin(angle) };
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w{ 1.0, 0.0 };
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = data[i + k];
                const std::complex<double> v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= w_len;
            }
        }
    }
}

std::vector<double> power_spectrum(std::span<const float> frame, std::size_t fft_size) {
    if (frame.size() > fft_size) {
        throw error{ error_code::invalid_argument, "frame longer than fft size" };
    }
    std::vector<std::complex<double>> buf(fft_size);
    const std::size_t m = frame.size();
    for (std::size_t i = 0; i < m; ++i) {
        const double hann = m > 1 ? 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(m - 1)) : 1.0;
        buf[i] = { frame[i] * hann, 0.0 };
    }
    fft(buf);
    std::vector<double> power(fft_size / 2 + 1);
    for (std::size_t k = 0; k < power.size(); ++k) {
        power[k] = std::norm(buf[k]);
    }
    return power;
}

}  // namespace neuro::dsp
