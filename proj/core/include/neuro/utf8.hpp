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

#ifndef NEURO_UTF8_HPP_
#define NEURO_UTF8_HPP_

#include <cstddef>
#include <string_view>
#include <vector>

namespace neuro::utf8 {

inline constexpr char32_t replacement_character = 0xFFFD;

/// Decodes UTF-8 into code points. Malformed sequences decode to U+FFFD and
/// consume one byte, so decoding never fails.
[[nodiscard]] std::vector<char32_t> decode(std::string_view text);

/// The last code point of `text`, or 0 for an empty string.
[[nodiscard]] char32_t last_code_point(std::string_view text);

[[nodiscard]] constexpr bool is_whitespace(char32_t c) noexcept {
    return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\v' || c == U'\f' || c == 0x00A0 || c == 0x2007 || c == 0x202F || c == 0x3000 || (c >= 0x2000 && c <= 0x200A);
}

}  // namespace neuro::utf8

#endif  // NEURO_UTF8_HPP_
