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

#include "neuro/utf8.hpp"

namespace neuro::utf8 {

namespace {

struct step {
    char32_t code_point;
    std::size_t length;
};

step decode_one(std::string_view s, std::size_t i) noexcept {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
        return { b0, 1 };
    }
    std::size_t len = 0;
    char32_t cp = 0;
    char32_t min = 0;
    if ((b0 & 0xE0U) == 0xC0U) {
        len = 2;
        cp = b0 & 0x1FU;
        min = 0x80;
    } else if ((b0 & 0xF0U) == 0xE0U) {
        len = 3;
        cp = b0 & 0x0FU;
        min = 0x800;
    } else if ((b0 & 0xF8U) == 0xF0U) {
        len = 4;
        cp = b0 & 0x07U;
        min = 0x10000;
    } else {
        return { replacement_character, 1 };
    }
    if (i + len > s.size()) {
        return { replacement_character, 1 };
    }
    for (std::size_t k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xC0U) != 0x80U) {
            return { replacement_character, 1 };
        }
        cp = (cp << 6U) | (b & 0x3FU);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        return { replacement_character, 1 };
    }
    return { cp, len };
}

}  // namespace

std::vector<char32_t> decode(std::string_view text) {
    std::vector<char32_t> out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        const step s = decode_one(text, i);
        out.push_back(s.code_point);
        i += s.length;
    }
    return out;
}

char32_t last_code_point(std::string_view text) {
    if (text.empty()) {
        return 0;
    }
    // Walk back over continuation bytes to the lead byte.
    std::size_t i = text.size() - 1;
    std::size_t back = 0;
    while (i > 0 && back < 3 && (static_cast<unsigned char>(text[i]) & 0xC0U) == 0x80U) {
        --i;
        ++back;
    }
    const step s = decode_one(text, i);
    return i + s.length == text.size() ? s.code_point : replacement_character;
}

}  // namespace neuro::utf8
