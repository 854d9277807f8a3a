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

#include "neuro/byte_io.hpp"
#include "neuro/linguistic.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>

namespace {

using namespace neuro;
using namespace neuro::linguistic;
using transcription::timed_transcript;

const std::filesystem::path data_dir{ NEURO_TEST_DATA_DIR };

timed_transcript transcript_from_json(const nlohmann::json &j) {
    timed_transcript t;
    t.audio_duration_s = j.at("audio_duration_s").get<double>();
    for (const auto &tok : j.at("tokens")) {
        t.tokens.push_back({ tok.at("text").get<std::string>(), tok.at("start").get<double>(), tok.at("end").get<double>() });
    }
    for (const auto &s : j.at("sentences")) {
        t.sentences.push_back({ s.at(0).get<std::size_t>(), s.at(1).get<std::size_t>() });
    }
    return t;
}

TEST(TokenLanguage, ScriptRules) {
    EXPECT_EQ(identify_token_language("नमस्ते"), language_tag::hindi);
    EXPECT_EQ(identify_token_language("hello"), language_tag::english);
    EXPECT_EQ(identify_token_language("123"), language_tag::other);
    EXPECT_EQ(identify_token_language("..."), language_tag::other);
    EXPECT_EQ(identify_token_language("привет"), language_tag::other);
    EXPECT_EQ(identify_token_language("café"), language_tag::english);
}

TEST(TokenLanguage, RomanizedHindiLexicon) {
    EXPECT_EQ(identify_token_language("nahi"), language_tag::hindi);
    EXPECT_EQ(identify_token_language("Acha!"), language_tag::hindi);
    EXPECT_EQ(identify_token_language("go"), language_tag::english);

    const lexicon custom = lexicon::parse("# test list\nhello\n\n");
    EXPECT_EQ(custom.size(), 1U);
    EXPECT_EQ(identify_token_language("hello", custom), language_tag::hindi);
    EXPECT_EQ(identify_token_language("nahi", custom), language_tag::english);
}

TEST(TokenLanguage, MixedScriptsMajority) {
    const script_counts c = count_scripts("abअ");
    EXPECT_EQ(c.latin, 2U);
    EXPECT_EQ(c.devanagari, 1U);
    EXPECT_EQ(identify_token_language("abअ"), language_tag::english);
    EXPECT_EQ(identify_token_language("aअ"), language_tag::hindi);
}

TEST(SwitchPoints, Examples) {
    using enum language_tag;
    EXPECT_EQ(count_switch_points(std::vector{ english, hindi, english }), 2U);
    EXPECT_EQ(count_switch_points(std::vector{ english, english, english }), 0U);
    EXPECT_EQ(count_switch_points(std::vector{ english, other, hindi, hindi, other, english }), 2U);
    EXPECT_EQ(count_switch_points(std::vector<language_tag>{}), 0U);
    EXPECT_EQ(count_switch_points(std::vector{ other, other }), 0U);
}

TEST(Features, GoldenFile) {
    const nlohmann::json golden = nlohmann::json::parse(read_text_file(data_dir / "golden_linguistic.json"));
    const linguistic_features f = extract_linguistic_features(transcript_from_json(golden.at("transcript")));
    const auto values = f.to_array();
    const auto &names = linguistic_features::field_names();
    for (std::size_t i = 0; i < linguistic_features::dimension; ++i) {
        EXPECT_DOUBLE_EQ(values[i], golden.at("expected").at(std::string{ names[i] }).get<double>()) << names[i];
    }
}

TEST(Features, EmptyTranscriptIsZero) {
    timed_transcript t;
    t.audio_duration_s = 5.0;
    EXPECT_EQ(extract_linguistic_features(t), linguistic_features{});
}

TEST(Features, ThirtyEnglishWordsPerMinute) {
    std::vector<std::string> words(30, "word");
    timed_transcript t = transcription::uniform_transcript(words, 60.0);
    t.sentences = { { 0, 30 } };
    const linguistic_features f = extract_linguistic_features(t);
    EXPECT_DOUBLE_EQ(f.speech_rate_wpm, 30.0);
    EXPECT_DOUBLE_EQ(f.english_ratio, 1.0);
    EXPECT_DOUBLE_EQ(f.switch_count, 0.0);
    EXPECT_DOUBLE_EQ(f.avg_sentence_len_words, 30.0);
}

TEST(Features, DuplicatingTokensKeepsRatios) {
    const std::vector<std::string> words{ "go", "अभी", "123", "play", "nahi" };
    std::vector<std::string> doubled;
    for (const auto &w : words) {
        doubled.push_back(w);
        doubled.push_back(w);
    }
    const linguistic_features a = extract_linguistic_features(transcription::uniform_transcript(words, 10.0));
    const linguistic_features b = extract_linguistic_features(transcription::uniform_transcript(doubled, 10.0));
    EXPECT_DOUBLE_EQ(a.english_ratio, b.english_ratio);
    EXPECT_DOUBLE_EQ(a.hindi_ratio, b.hindi_ratio);
    EXPECT_DOUBLE_EQ(a.other_ratio, b.other_ratio);
    EXPECT_DOUBLE_EQ(a.avg_word_len_chars, b.avg_word_len_chars);
    EXPECT_DOUBLE_EQ(2.0 * a.speech_rate_wpm, b.speech_rate_wpm);
}

TEST(Features, RatiosSumToOneAndSwitchBound) {
    const std::vector<std::string> words{ "hi", "अभी", "42", "kya", "run", "!", "घर" };
    const linguistic_features f = extract_linguistic_features(transcription::uniform_transcript(words, 7.0));
    EXPECT_NEAR(f.english_ratio + f.hindi_ratio + f.other_ratio, 1.0, 1e-12);
    EXPECT_LE(f.switch_count, static_cast<double>(words.size() - 1));
}

TEST(Features, RetimingTokensKeepsFeatures) {
    const std::vector<std::string> words{ "hum", "park", "gaye.", "then", "अभी", "home" };
    timed_transcript even = transcription::uniform_transcript(words, 12.0);
    timed_transcript uneven = even;
    const std::vector<double> starts{ 0.0, 0.3, 1.5, 2.0, 2.9, 3.9 };
    for (std::size_t i = 0; i < words.size(); ++i) {
        uneven.tokens[i].start_s = starts[i];
        uneven.tokens[i].end_s = starts[i] + 0.5;
    }
    uneven.sentences = transcription::segment_sentences(uneven.tokens);
    ASSERT_EQ(uneven.sentences, even.sentences);
    EXPECT_EQ(extract_linguistic_features(even), extract_linguistic_features(uneven));
}

TEST(Features, ArrayRoundTrip) {
    linguistic_features f;
    f.avg_word_len_chars = 1.5;
    f.switch_rate_per_min = 7.25;
    const auto a = f.to_array();
    EXPECT_EQ(linguistic_features::from_array(a), f);
    EXPECT_EQ(linguistic_features::field_names().front(), "avg_word_len_chars");
    EXPECT_EQ(linguistic_features::field_names().back(), "switch_rate_per_min");
}

}  // namespace
