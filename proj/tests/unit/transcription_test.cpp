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
#include "neuro/error.hpp"
#include "neuro/process.hpp"
#include "neuro/transcription.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

namespace {

using namespace neuro;
using namespace neuro::transcription;

std::vector<timed_token> tokens_at(std::initializer_list<std::tuple<const char *, double, double>> spec) {
    std::vector<timed_token> out;
    for (const auto &[text, a, b] : spec) {
        out.push_back({ text, a, b });
    }
    return out;
}

audio::audio_clip tone_clip(double seconds) {
    audio::audio_clip clip;
    const auto n = static_cast<std::size_t>(seconds * 16000);
    for (std::size_t i = 0; i < n; ++i) {
        clip.samples.push_back(static_cast<float>(0.3 * std::sin(2.0 * std::numbers::pi * 250.0 * static_cast<double>(i) / 16000.0)));
    }
    return clip;
}

TEST(Segmentation, PunctuationClosesSentences) {
    const auto toks = tokens_at({ { "hi", 0.0, 0.5 }, { "there.", 0.5, 1.0 }, { "how", 1.0, 1.5 }, { "are", 1.5, 2.0 }, { "you?", 2.0, 2.5 }, { "ok", 2.5, 3.0 } });
    const std::vector<sentence_range> expected{ { 0, 2 }, { 2, 5 }, { 5, 6 } };
    EXPECT_EQ(segment_sentences(toks), expected);
}

TEST(Segmentation, DandaAndExclamation) {
    const auto toks = tokens_at({ { "चलो।", 0.0, 0.5 }, { "wow!", 0.5, 1.0 }, { "yes", 1.0, 1.5 } });
    const std::vector<sentence_range> expected{ { 0, 1 }, { 1, 2 }, { 2, 3 } };
    EXPECT_EQ(segment_sentences(toks), expected);
}

TEST(Segmentation, LongPauseSplits) {
    const auto toks = tokens_at({ { "one", 0.0, 0.4 }, { "two", 0.5, 0.9 }, { "three", 2.0, 2.4 }, { "four", 3.4, 3.8 } });
    // 1.1 s gap splits; exactly 1.0 s does not.
    const std::vector<sentence_range> expected{ { 0, 2 }, { 2, 4 } };
    EXPECT_EQ(segment_sentences(toks), expected);
}

TEST(Segmentation, EmptyInput) {
    EXPECT_TRUE(segment_sentences({}).empty());
}

TEST(UniformTranscript, EvenTimings) {
    const std::vector<std::string> words{ "a", "b", "c", "d" };
    const timed_transcript t = uniform_transcript(words, 8.0);
    ASSERT_EQ(t.tokens.size(), 4U);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_DOUBLE_EQ(t.tokens[i].start_s, 2.0 * static_cast<double>(i));
        EXPECT_DOUBLE_EQ(t.tokens[i].end_s, 2.0 * static_cast<double>(i + 1));
    }
    EXPECT_DOUBLE_EQ(t.audio_duration_s, 8.0);
    EXPECT_NO_THROW(validate(t));
}

TEST(SplitWords, Whitespace) {
    const std::vector<std::string> expected{ "go", "अभी", "now." };
    EXPECT_EQ(split_words("  go\tअभी\n now.  "), expected);
}

TEST(Validate, RejectsOverlapAndOverrun) {
    timed_transcript t;
    t.audio_duration_s = 2.0;
    t.tokens = tokens_at({ { "a", 0.0, 1.0 }, { "b", 0.5, 1.5 } });
    t.sentences = { { 0, 2 } };
    EXPECT_THROW(validate(t), error);

    t.tokens = tokens_at({ { "a", 0.0, 1.0 }, { "b", 1.0, 3.0 } });
    EXPECT_THROW(validate(t), error);

    t.tokens = tokens_at({ { "a", 0.0, 1.0 }, { "b", 1.0, 2.4 } });
    EXPECT_NO_THROW(validate(t));
}

TEST(StubTranscriber, SidecarTextWithUniformTiming) {
    stub_transcription_backend stub{ 3 };
    const audio::audio_clip clip = tone_clip(4.0);
    transcription_hints hints;
    hints.sidecar_text = "go अभी. go अभी.";
    const timed_transcript t = transcribe(clip, stub, hints);
    ASSERT_EQ(t.tokens.size(), 4U);
    EXPECT_EQ(t.tokens[1].text, "अभी.");
    EXPECT_DOUBLE_EQ(t.tokens[3].start_s, 3.0);
    ASSERT_EQ(t.sentences.size(), 2U);
}

TEST(StubTranscriber, SilenceGivesNoTokens) {
    stub_transcription_backend stub;
    audio::audio_clip clip;
    clip.samples.assign(32000, 0.0F);
    const timed_transcript t = transcribe(clip, stub);
    EXPECT_TRUE(t.tokens.empty());
    EXPECT_TRUE(t.sentences.empty());
}

TEST(StubTranscriber, PseudoTextIsDeterministicAndPaced) {
    stub_transcription_backend a{ 11 };
    stub_transcription_backend b{ 11 };
    const audio::audio_clip clip = tone_clip(10.0);
    const timed_transcript ta = transcribe(clip, a);
    const timed_transcript tb = transcribe(clip, b);
    EXPECT_EQ(ta, tb);
    EXPECT_EQ(to_json_string(ta), to_json_string(tb));
    EXPECT_NEAR(static_cast<double>(ta.tokens.size()), 20.0, 6.0);
}

TEST(Transcribe, RequiresPipelineRate) {
    stub_transcription_backend stub;
    audio::audio_clip clip = tone_clip(1.0);
    clip.sample_rate_hz = 8000;
    try {
        (void)transcribe(clip, stub);
        FAIL();
    } catch (const error &e) {
        EXPECT_EQ(e.code(), error_code::rate_mismatch);
    }
}

TEST(CommandOutput, ParsesTokensAndSplitsPieces) {
    const timed_transcript t = parse_command_output(R"({"tokens":[{"text":" hello world","start":0.0,"end":1.0},{"text":"नमस्ते.","start":1.0,"end":1.5}]})", 2.0);
    ASSERT_EQ(t.tokens.size(), 3U);
    EXPECT_EQ(t.tokens[0].text, "hello");
    EXPECT_DOUBLE_EQ(t.tokens[0].end_s, 0.5);
    EXPECT_EQ(t.tokens[2].text, "नमस्ते.");
    EXPECT_EQ(t.sentences.size(), 1U);
}

TEST(CommandOutput, GarbageIsBackendFailure) {
    try {
        (void)parse_command_output("not json", 1.0);
        FAIL();
    } catch (const error &e) {
        EXPECT_EQ(e.code(), error_code::backend_failure);
    }
}

TEST(TranscribeCommandBackend, MissingExecutableIsUnavailable) {
    command_transcription_backend backend{ "/nonexistent/neuro-whisper", "small" };
    EXPECT_FALSE(backend.ready());
    try {
        (void)transcribe(tone_clip(1.0), backend);
        FAIL();
    } catch (const error &e) {
        EXPECT_EQ(e.code(), error_code::backend_unavailable);
    }
}

TEST(TranscribeCommandBackend, RunsExternalScript) {
    const auto script = unique_temp_path("fake-whisper-", ".sh");
    write_text_file(script, "#!/bin/sh\necho '{\"tokens\":[{\"text\":\"go\",\"start\":0.1,\"end\":0.4},{\"text\":\"abhi\",\"start\":0.5,\"end\":0.9}]}'\n");
    std::filesystem::permissions(script, std::filesystem::perms::owner_all);
    command_transcription_backend backend{ script.string(), "small" };
    EXPECT_TRUE(backend.ready());
    const timed_transcript t = transcribe(tone_clip(1.0), backend);
    ASSERT_EQ(t.tokens.size(), 2U);
    EXPECT_EQ(t.tokens[1].text, "abhi");
    std::filesystem::remove(script);
}

}  // namespace
