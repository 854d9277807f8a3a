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

#ifndef NEURO_LINGUISTIC_HPP_
#define NEURO_LINGUISTIC_HPP_

#include "neuro/transcription.hpp"

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace neuro::linguistic {

enum class language_tag {
    english,
    hindi,
    other,
};

[[nodiscard]] std::string_view to_string(language_tag tag) noexcept;

/// Lowercase romanized-Hindi word list. Immutable once built.
class lexicon {
  public:
    lexicon() = default;

    /// One word per line; blank lines and lines starting with '#' skipped.
    [[nodiscard]] static lexicon parse(std::string_view text);
    [[nodiscard]] static lexicon load(const std::filesystem::path &path);
    /// The list compiled into the library.
    [[nodiscard]] static const lexicon &builtin();

    [[nodiscard]] bool contains(std::string_view lowercase_word) const;
    [[nodiscard]] std::size_t size() const noexcept { return words_.size(); }

  private:
    std::unordered_set<std::string> words_;
};

/// Per-token character census by script.
struct script_counts {
    std::size_t latin{ 0 };
    std::size_t devanagari{ 0 };
    std::size_t other_alphabetic{ 0 };

    [[nodiscard]] std::size_t alphabetic() const noexcept { return latin + devanagari + other_alphabetic; }
};

[[nodiscard]] script_counts count_scripts(std::string_view token_text);

/**
 * HINDI when at least half of the alphabetic characters are Devanagari or
 * the lowercased token (ASCII punctuation trimmed) is in the lexicon;
 * ENGLISH when at least half are Latin; OTHER otherwise, including tokens
 * with no alphabetic characters.
 */
[[nodiscard]] language_tag identify_token_language(std::string_view token_text, const lexicon &words = lexicon::builtin());

/// Adjacent English/Hindi alternations; OTHER tags are skipped over.
[[nodiscard]] std::size_t count_switch_points(std::span<const language_tag> tags);

struct linguistic_features {
    double avg_word_len_chars{ 0.0 };
    double avg_sentence_len_words{ 0.0 };
    double speech_rate_wpm{ 0.0 };
    double english_ratio{ 0.0 };
    double hindi_ratio{ 0.0 };
    double other_ratio{ 0.0 };
    double switch_count{ 0.0 };
    double switch_rate_per_min{ 0.0 };

    static constexpr std::size_t dimension = 8;

    /// Fixed serialization order, matching field_names().
    [[nodiscard]] std::array<double, dimension> to_array() const noexcept;
    [[nodiscard]] static linguistic_features from_array(std::span<const double, dimension> values) noexcept;
    [[nodiscard]] static const std::array<std::string_view, dimension> &field_names() noexcept;

    friend bool operator==(const linguistic_features &, const linguistic_features &) = default;
};

/// Total over any transcript satisfying the transcript invariants. An empty
/// transcript gives the zero vector.
[[nodiscard]] linguistic_features extract_linguistic_features(const transcription::timed_transcript &transcript,
                                                              const lexicon &words = lexicon::builtin());

}  // namespace neuro::linguistic

#endif  // NEURO_LINGUISTIC_HPP_
