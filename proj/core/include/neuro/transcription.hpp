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

#ifndef NEURO_TRANSCRIPTION_HPP_
#define NEURO_TRANSCRIPTION_HPP_

#include "neuro/audio.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace neuro::transcription {

struct timed_token {
    std::string text;
    double start_s{ 0.0 };
    double end_s{ 0.0 };

    friend bool operator==(const timed_token &, const timed_token &) = default;
};

/// Half-open token index range [begin, end).
struct sentence_range {
    std::size_t begin{ 0 };
    std::size_t end{ 0 };

    [[nodiscard]] std::size_t size() const noexcept { return end - begin; }
    friend bool operator==(const sentence_range &, const sentence_range &) = default;
};

struct timed_transcript {
    std::vector<timed_token> tokens;
    std::vector<sentence_range> sentences;
    double audio_duration_s{ 0.0 };

    friend bool operator==(const timed_transcript &, const timed_transcript &) = default;
};

/// Inter-token silence that closes a sentence even without punctuation.
inline constexpr double sentence_pause_s = 1.0;
/// Slack allowed when checking token ordering.
inline constexpr double overlap_tolerance_s = 0.001;
/// Slack allowed for the last token running past the end of the audio.
inline constexpr double trailing_tolerance_s = 0.5;

/// Splits after tokens ending in '.', '?', '!' or the Devanagari danda, and
/// after gaps longer than sentence_pause_s. Trailing tokens form a final
/// sentence.
[[nodiscard]] std::vector<sentence_range> segment_sentences(std::span<const timed_token> tokens);

/// Throws error_code::backend_failure describing the first broken invariant.
void validate(const timed_transcript &transcript);

/// Whitespace tokenization used for sidecar transcript text.
[[nodiscard]] std::vector<std::string> split_words(std::string_view text);

/// Spreads words uniformly over [0, duration): word i covers
/// [i * d / n, (i + 1) * d / n).
[[nodiscard]] timed_transcript uniform_transcript(std::span<const std::string> words, double duration_s);

/// Extra per-request context. The stub consults the sidecar text when set.
struct transcription_hints {
    std::optional<std::string> sidecar_text;
};

class transcription_backend {
  public:
    virtual ~transcription_backend() = default;

    /// "stub" or "real".
    [[nodiscard]] virtual std::string_view kind() const noexcept = 0;
    /// Whether run() can be expected to succeed (model reachable).
    [[nodiscard]] virtual bool ready() const = 0;
    [[nodiscard]] virtual timed_transcript run(const audio::audio_clip &clip, const transcription_hints &hints) = 0;
};

/**
 * Deterministic offline backend. With sidecar text it tokenizes the text
 * and assigns uniform timings over the clip. Without it, silent clips give
 * an empty transcript and anything else gets seeded pseudo-text (about two
 * words per second, mixing English and Hindi) keyed on the clip samples.
 */
class stub_transcription_backend final : public transcription_backend {
  public:
    explicit stub_transcription_backend(std::uint64_t seed = 0) :
        seed_{ seed } {}

    [[nodiscard]] std::string_view kind() const noexcept override { return "stub"; }
    [[nodiscard]] bool ready() const override { return true; }
    [[nodiscard]] timed_transcript run(const audio::audio_clip &clip, const transcription_hints &hints) override;

    /// Peak amplitude at or below which a clip counts as silence.
    static constexpr float silence_peak = 1e-3F;

  private:
    std::uint64_t seed_;
};

/**
 * Adapter for an external Whisper-family transcriber. The configured
 * executable is invoked as `<command> --model <model_id> <wav_path>` and must
 * print JSON `{"tokens": [{"text": ..., "start": ..., "end": ...}, ...]}` on
 * stdout. One transcription runs at a time.
 */
class command_transcription_backend final : public transcription_backend {
  public:
    command_transcription_backend(std::string command, std::string model_id);

    [[nodiscard]] std::string_view kind() const noexcept override { return "real"; }
    [[nodiscard]] bool ready() const override;
    [[nodiscard]] timed_transcript run(const audio::audio_clip &clip, const transcription_hints &hints) override;

  private:
    std::string command_;
    std::string model_id_;
    std::mutex in_flight_;
};

/// Parses the adapter's stdout into a transcript over `duration_s`.
[[nodiscard]] timed_transcript parse_command_output(std::string_view json_text, double duration_s);

/**
 * Runs the backend on a pipeline-rate clip and validates the result.
 *
 * Throws error_code::rate_mismatch when the clip is not at 16 kHz and
 * error_code::backend_failure when the backend throws or returns a
 * transcript violating the ordering invariants.
 */
[[nodiscard]] timed_transcript transcribe(const audio::audio_clip &clip, transcription_backend &backend,
                                          const transcription_hints &hints = {});

[[nodiscard]] std::string load_sidecar(const std::filesystem::path &path);

/// Canonical JSON text, used for determinism checks and debugging dumps.
[[nodiscard]] std::string to_json_string(const timed_transcript &transcript);

}  // namespace neuro::transcription

#endif  // NEURO_TRANSCRIPTION_HPP_
