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

#ifndef NEURO_RNG_HPP_
#define NEURO_RNG_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <utility>

namespace neuro {

/// splitmix64 finalizer; the building block for counter-based streams.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31U);
}

[[nodiscard]] constexpr std::uint64_t hash_combine(const std::uint64_t seed, const std::uint64_t value) noexcept {
    return mix64(seed ^ mix64(value));
}

/// FNV-1a over raw bytes, then finalized with mix64.
[[nodiscard]] inline std::uint64_t hash_bytes(std::span<const std::byte> bytes, std::uint64_t seed = 0) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL ^ mix64(seed);
    for (const std::byte b : bytes) {
        h ^= static_cast<std::uint64_t>(b);
        h *= 0x100000001B3ULL;
    }
    return mix64(h);
}

/// Maps a 64-bit word onto [0, 1) using the top 53 bits.
[[nodiscard]] constexpr double unit_interval(const std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11U) * 0x1.0p-53;
}

/// Counter-based stream: value i is a pure function of (key, i).
class counter_stream {
  public:
    explicit constexpr counter_stream(const std::uint64_t key) noexcept :
        key_{ key } {}

    [[nodiscard]] constexpr std::uint64_t bits(const std::uint64_t counter) const noexcept {
        return mix64(key_ ^ mix64(counter + 0x632BE59BD9B4E019ULL));
    }

    /// Uniform in [-1, 1).
    [[nodiscard]] constexpr double symmetric(const std::uint64_t counter) const noexcept {
        return 2.0 * unit_interval(bits(counter)) - 1.0;
    }

  private:
    std::uint64_t key_;
};

/// Seeded sequential generator. The conversions to doubles, integers and
/// normals are written out here rather than taken from <random> so results
/// are identical across standard library implementations.
class rng {
  public:
    explicit rng(const std::uint64_t seed) :
        engine_{ mix64(seed) } {}

    [[nodiscard]] std::uint64_t next_u64() { return engine_(); }

    [[nodiscard]] double uniform() { return unit_interval(engine_()); }

    [[nodiscard]] double uniform(const double lo, const double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). Lemire-style rejection keeps it unbiased.
    [[nodiscard]] std::size_t uniform_index(const std::size_t n) {
        const std::uint64_t bound = n;
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = engine_();
            if (r >= threshold) {
                return static_cast<std::size_t>(r % bound);
            }
        }
    }

    [[nodiscard]] double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) {
            u1 = uniform();
        }
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    [[nodiscard]] double normal(const double mean, const double stddev) { return mean + stddev * normal(); }

    template <typename T>
    void shuffle(std::span<T> values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            const std::size_t j = uniform_index(i);
            std::swap(values[i - 1], values[j]);
        }
    }

  private:
    std::mt19937_64 engine_;
    double spare_{ 0.0 };
    bool has_spare_{ false };
};

}  // namespace neuro

#endif  // NEURO_RNG_HPP_
