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

#include "neuro/linguistic.hpp"

#include "neuro/byte_io.hpp"
#include "neuro/utf8.hpp"

#include <algorithm>
#include <cctype>

namespace neuro::linguistic {

namespace detail {
extern const std::string_view builtin_lexicon_text;
}  // namespace detail

namespace {

bool is_devanagari_letter(char32_t c) noexcept {
    if (c >= 0x0900 && c <= 0x097F) {
        // Danda, double danda, digits and the abbreviation sign are punctuation or numerals.
        return !(c >= 0x0964 && c <= 0x0970);
    }
    return c >= 0xA8E0 && c <= 0xA8FF;
}

bool is_latin_letter(char32_t c) noexcept {
    if ((c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z')) {
        return true;
    }
    if (c >= 0x00C0 && c <= 0x024F) {
        return c != 0x00D7 && c != 0x00F7;
    }
    return c >= 0x1E00 && c <= 0x1EFF;
}

bool is_other_letter(char32_t c) noexcept {
    if (c >= 0x0370 && c <= 0x058F) {
        return true;  // Greek, Cyrillic, Armenian
    }
    if (c >= 0x05D0 && c <= 0x05EA) {
        return true;  // Hebrew letters
    }
    if (c >= 0x0620 && c <= 0x064A) {
        return true;  // Arabic letters
    }
    if (c >= 0x0980 && c <= 0x0DFF) {
        // Other Brahmic blocks; each keeps its digits at offsets 0x66-0x6F.
        const char32_t offset = c & 0x7FU;
        return !(offset >= 0x64 && offset <= 0x6F);
    }
    if (c >= 0x0E01 && c <= 0x0E4E) {
        return true;  // Thai
    }
    if ((c >= 0x1100 && c <= 0x11FF) || (c >= 0xAC00 && c <= 0xD7AF)) {
        return true;  // Hangul
    }
    if ((c >= 0x3041 && c <= 0x30FF) || (c >= 0x3400 && c <= 0x4DBF) || (c >= 0x4E00 && c <= 0x9FFF)) {
        return true;  // Kana and CJK ideographs
    }
    return false;
}

std::string lowercase_trimmed(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    const auto is_trim = [](char ch) {
        const auto u = static_cast<unsigned char>(ch);
        return u < 0x80 && std::ispunct(u) != 0;
    };
    while (begin < end && is_trim(text[begin])) {
        ++begin;
    }
    while (end > begin && is_trim(text[end - 1])) {
        --end;
    }
    std::string out{ text.substr(begin, end - begin) };
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(c < 0x80 ? std::tolower(c) : c); });
    return out;
}

}  // namespace

std::string_view to_string(const language_tag tag) noexcept {
    switch (tag) {
        case language_tag::english: return "ENGLISH";
        case language_tag::hindi: return "HINDI";
        case language_tag::other: return "OTHER";
    }
    return "OTHER";
}

lexicon lexicon::parse(std::string_view text) {
    lexicon lex;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front())) != 0) {
            line.remove_prefix(1);
        }
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())) != 0) {
            line.remove_suffix(1);
        }
        if (!line.empty() && line.front() != '#') {
            lex.words_.insert(lowercase_trimmed(line));
        }
        if (nl == std::string_view::npos) {
            break;
        }
        pos = nl + 1;
    }
    return lex;
}

lexicon lexicon::load(const std::filesystem::path &path) {
    return parse(read_text_file(path));
}

const lexicon &lexicon::builtin() {
    static const lexicon instance = parse(detail::builtin_lexicon_text);
    return instance;
}

bool lexicon::contains(std::string_view lowercase_word) const {
    return words_.find(std::string{ lowercase_word }) != words_.end();
}

script_counts count_scripts(std::string_view token_text) {
    script_counts counts;
    for (const char32_t c : utf8::decode(token_text)) {
        if (is_devanagari_letter(c)) {
            ++counts.devanagari;
        } else if (is_latin_letter(c)) {
            ++counts.latin;
        } else if (is_other_letter(c)) {
            ++counts.other_alphabetic;
        }
    }
    return counts;
}

language_tag identify_token_language(std::string_view token_text, const lexicon &words) {
    const script_counts counts = count_scripts(token_text);
    const std::size_t alpha = counts.alphabetic();
    if (alpha == 0) {
        return language_tag::other;
    }
    if (2 * counts.devanagari >= alpha || words.contains(lowercase_trimmed(token_text))) {
        return language_tag::hindi;
    }
    if (2 * counts.latin >= alpha) {
        return language_tag::english;
    }
    return language_tag::other;
}

std::size_t count_switch_points(std::span<const language_tag> tags) {
    std::size_t switches = 0;
    bool have_previous = false;
    language_tag previous = language_tag::other;
    for (const language_tag tag : tags) {
        if (tag == language_tag::other) {
            continue;
        }
        if (have_previous && tag != previous) {
            ++switches;
        }
        previous = tag;
        have_previous = true;
    }
    return switches;
}

std::array<double, linguistic_features::dimension> linguistic_features::to_array() const noexcept {
    return { avg_word_len_chars, avg_sentence_len_words, speech_rate_wpm, english_ratio, hindi_ratio, other_ratio, switch_count, switch_rate_per_min };
}

linguistic_features linguistic_features::from_array(std::span<const double, dimension> v) noexcept {
    return { v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7] };
}

const std::array<std::string_view, linguistic_features::dimension> &linguistic_features::field_names() noexcept {
    static constexpr std::array<std::string_view, dimension> names = {
        "avg_word_len_chars", "avg_sentence_len_words", "speech_rate_wpm", "english_ratio",
        "hindi_ratio", "other_ratio", "switch_count", "switch_rate_per_min",
    };
    return names;
}

linguistic_features extract_linguistic_features(const transcription::timed_transcript &transcript, const lexicon &words) {
    const std::size_t n = transcript.tokens.size();
    if (n == 0) {
        return {};
    }
    std::vector<language_tag> tags;
    tags.reserve(n);
    std::size_t letters = 0;
    std::size_t english = 0;
    std::size_t hindi = 0;
    for (const transcription::timed_token &tok : transcript.tokens) {
        letters += count_scripts(tok.text).alphabetic();
        const language_tag tag = identify_token_language(tok.text, words);
        english += tag == language_tag::english ? 1 : 0;
        hindi += tag == language_tag::hindi ? 1 : 0;
        tags.push_back(tag);
    }
    const auto count = static_cast<double>(n);
    const double minutes = transcript.audio_duration_s / 60.0;
    const std::size_t sentence_count = std::max<std::size_t>(1, transcript.sentences.size());
    const std::size_t switches = count_switch_points(tags);

    linguistic_features f;
    f.avg_word_len_chars = static_cast<double>(letters) / count;
    f.avg_sentence_len_words = count / static_cast<double>(sentence_count);
    f.speech_rate_wpm = count / minutes;
    f.english_ratio = static_cast<double>(english) / count;
    f.hindi_ratio = static_cast<double>(hindi) / count;
    f.other_ratio = static_cast<double>(n - english - hindi) / count;
    f.switch_count = static_cast<double>(switches);
    f.switch_rate_per_min = static_cast<double>(switches) / minutes;
    return f;
}

}  // namespace neuro::linguistic
