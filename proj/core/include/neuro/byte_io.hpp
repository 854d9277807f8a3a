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

#ifndef NEURO_BYTE_IO_HPP_
#define NEURO_BYTE_IO_HPP_

#include "neuro/error.hpp"

#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace neuro {

/// Appends little-endian scalars to a growing byte buffer.
class byte_writer {
  public:
    void put_u8(std::uint8_t v) { bytes_.push_back(static_cast<std::byte>(v)); }
    void put_u16(std::uint16_t v) { put_le(v); }
    void put_u32(std::uint32_t v) { put_le(v); }
    void put_u64(std::uint64_t v) { put_le(v); }
    void put_i16(std::int16_t v) { put_le(static_cast<std::uint16_t>(v)); }
    void put_i32(std::int32_t v) { put_le(static_cast<std::uint32_t>(v)); }
    void put_f32(float v) { put_le(std::bit_cast<std::uint32_t>(v)); }
    void put_f64(double v) { put_le(std::bit_cast<std::uint64_t>(v)); }

    void put_bytes(std::span<const std::byte> data) { bytes_.insert(bytes_.end(), data.begin(), data.end()); }
    void put_string(std::string_view s) { put_bytes(std::as_bytes(std::span{ s.data(), s.size() })); }

    void put_f64_array(std::span<const double> values) {
        put_u64(values.size());
        for (const double v : values) {
            put_f64(v);
        }
    }

    [[nodiscard]] const std::vector<std::byte> &bytes() const noexcept { return bytes_; }
    [[nodiscard]] std::vector<std::byte> release() noexcept { return std::move(bytes_); }

  private:
    template <typename U>
    void put_le(U v) {
        for (std::size_t i = 0; i < sizeof(U); ++i) {
            bytes_.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xFFU));
        }
    }

    std::vector<std::byte> bytes_;
};

/// Bounds-checked little-endian reader. Running off the end raises the
/// error code given at construction.
class byte_reader {
  public:
    explicit byte_reader(std::span<const std::byte> data, error_code on_truncation = error_code::corrupt_artifact) :
        data_{ data },
        on_truncation_{ on_truncation } {}

    [[nodiscard]] std::uint8_t u8() { return get_le<std::uint8_t>(); }
    [[nodiscard]] std::uint16_t u16() { return get_le<std::uint16_t>(); }
    [[nodiscard]] std::uint32_t u32() { return get_le<std::uint32_t>(); }
    [[nodiscard]] std::uint64_t u64() { return get_le<std::uint64_t>(); }
    [[nodiscard]] std::int16_t i16() { return static_cast<std::int16_t>(get_le<std::uint16_t>()); }
    [[nodiscard]] std::int32_t i32() { return static_cast<std::int32_t>(get_le<std::uint32_t>()); }
    [[nodiscard]] float f32() { return std::bit_cast<float>(get_le<std::uint32_t>()); }
    [[nodiscard]] double f64() { return std::bit_cast<double>(get_le<std::uint64_t>()); }

    [[nodiscard]] std::span<const std::byte> take(std::size_t n) {
        require(n);
        auto out = data_.subspan(pos_, n);
        pos_ += n;
        return out;
    }

    [[nodiscard]] std::string string(std::size_t n) {
        auto raw = take(n);
        return { reinterpret_cast<const char *>(raw.data()), raw.size() };
    }

    [[nodiscard]] std::vector<double> f64_array() {
        const std::uint64_t n = u64();
        if (n > remaining() / sizeof(double)) {
            throw error{ on_truncation_, "array length exceeds remaining payload" };
        }
        std::vector<double> out(static_cast<std::size_t>(n));
        for (double &v : out) {
            v = f64();
        }
        return out;
    }

    void skip(std::size_t n) { (void) take(n); }

    [[nodiscard]] std::size_t position() const noexcept { return pos_; }
    [[nodiscard]] std::size_t remaining() const noexcept { return data_.size() - pos_; }
    [[nodiscard]] bool at_end() const noexcept { return pos_ == data_.size(); }

  private:
    void require(std::size_t n) const {
        if (n > remaining()) {
            throw error{ on_truncation_, "unexpected end of data" };
        }
    }

    template <typename U>
    U get_le() {
        require(sizeof(U));
        U v{};
        for (std::size_t i = 0; i < sizeof(U); ++i) {
            v |= static_cast<U>(static_cast<U>(data_[pos_ + i]) << (8 * i));
        }
        pos_ += sizeof(U);
        return v;
    }

    std::span<const std::byte> data_;
    std::size_t pos_{ 0 };
    error_code on_truncation_;
};

[[nodiscard]] std::vector<std::byte> read_file_bytes(const std::filesystem::path &path);
void write_file_bytes(const std::filesystem::path &path, std::span<const std::byte> bytes);
[[nodiscard]] std::string read_text_file(const std::filesystem::path &path);
void write_text_file(const std::filesystem::path &path, std::string_view text);

[[nodiscard]] inline std::span<const std::byte> as_byte_span(std::string_view s) noexcept {
    return std::as_bytes(std::span{ s.data(), s.size() });
}

}  // namespace neuro

#endif  // NEURO_BYTE_IO_HPP_
