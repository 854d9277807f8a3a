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

#include "neuro/transcription.hpp"

#include "neuro/byte_io.hpp"
#include "neuro/error.hpp"
#include "neuro/process.hpp"
#include "neuro/rng.hpp"
#include "neuro/utf8.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fmt/format.h>

namespace neuro::transcription {

namespace {

bool ends_sentence(std::string_view text) {
    const char32_t last = utf8::last_code_point(text);
    return last == U'.' || last == U'?' || last == U'!' || last == 0x0964;
}

// Vocabulary for the stub's pseudo-text when no sidecar is available.
constexpr std::array<std::string_view, 16> pseudo_english = {
    "i", "want", "the", "ball", "mummy", "come", "here", "look", "water", "play", "red", "car", "no", "yes", "go", "my",
};
constexpr std::array<std::string_view, 12> pseudo_hindi = {
    "नहीं", "पानी", "अभी", "चलो", "मेरा", "देखो", "हाँ", "खाना", "घर", "बाहर", "दो", "क्या",
};

}  // namespace

std::vector<sentence_range> segment_sentences(std::span<const timed_token> tokens) {
    std::vector<sentence_range> out;
    std::size_t begin = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const bool last = i + 1 == tokens.size();
        const bool pause = !last && tokens[i + 1].start_s - tokens[i].end_s > sentence_pause_s;
        if (last || ends_sentence(tokens[i].text) || pause) {
            out.push_back({ begin, i + 1 });
            begin = i + 1;
        }
    }
    return out;
}

void validate(const timed_transcript &t) {
    if (!(t.audio_duration_s > 0.0) || !std::isfinite(t.audio_duration_s)) {
        throw error{ error_code::backend_failure, "transcript duration must be positive and finite" };
    }
    for (std::size_t i = 0; i < t.tokens.size(); ++i) {
        const timed_token &tok = t.tokens[i];
        if (tok.text.empty()) {
            throw error{ error_code::backend_failure, fmt::format("token {} is empty", i) };
        }
        if (!(tok.start_s >= 0.0) || !(tok.end_s > tok.start_s) || !std::isfinite(tok.end_s)) {
            throw error{ error_code::backend_failure, fmt::format("token {} has invalid timing [{}, {})", i, tok.start_s, tok.end_s) };
        }
        if (i + 1 < t.tokens.size() && tok.end_s > t.tokens[i + 1].start_s + overlap_tolerance_s) {
            throw error{ error_code::backend_failure, fmt::format("tokens {} and {} overlap", i, i + 1) };
        }
    }
    if (!t.tokens.empty() && t.tokens.back().end_s > t.audio_duration_s + trailing_tolerance_s) {
        throw error{ error_code::backend_failure, "last token ends after the audio" };
    }
    std::size_t expected = 0;
    for (const sentence_range &s : t.sentences) {
        if (s.begin != expected || s.end <= s.begin) {
            throw error{ error_code::backend_failure, "sentence ranges do not partition the tokens" };
        }
        expected = s.end;
    }
    if (expected != t.tokens.size()) {
        throw error{ error_code::backend_failure, "sentence ranges do not cover every token" };
    }
}

std::vector<std::string> split_words(std::string_view text) {
    std::vector<std::string> words;
    std::string current;
    // Whitespace is matched on code points so non-breaking spaces separate words too.
    std::size_t i = 0;
    const auto flush = [&] {
        if (!current.empty()) {
            words.push_back(std::move(current));
            current.clear();
        }
    };
    while (i < text.size()) {
        std::size_t len = 1;
        const auto b0 = static_cast<unsigned char>(text[i]);
        if (b0 >= 0xF0) {
            len = 4;
        } else if (b0 >= 0xE0) {
            len = 3;
        } else if (b0 >= 0xC0) {
            len = 2;
        }
        len = std::min(len, text.size() - i);
        const std::string_view piece = text.substr(i, len);
        const std::vector<char32_t> cps = utf8::decode(piece);
        if (cps.size() == 1 && utf8::is_whitespace(cps.front())) {
            flush();
        } else {
            current.append(piece);
        }
        i += len;
    }
    flush();
    return words;
}

timed_transcript uniform_transcript(std::span<const std::string> words, double duration_s) {
    timed_transcript t;
    t.audio_duration_s = duration_s;
    const double n = static_cast<double>(words.size());
    t.tokens.reserve(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
        t.tokens.push_back({ words[i], static_cast<double>(i) * duration_s / n, static_cast<double>(i + 1) * duration_s / n });
    }
    t.sentences = segment_sentences(t.tokens);
    return t;
}

timed_transcript stub_transcription_backend::run(const audio::audio_clip &clip, const transcription_hints &hints) {
    const double duration = clip.duration_s();
    if (hints.sidecar_text) {
        const std::vector<std::string> words = split_words(*hints.sidecar_text);
        return uniform_transcript(words, duration);
    }

    float peak = 0.0F;
    for (const float s : clip.samples) {
        peak = std::max(peak, std::abs(s));
    }
    if (peak <= silence_peak) {
        return uniform_transcript({}, duration);
    }

    const std::uint64_t key = hash_bytes(std::as_bytes(std::span{ clip.samples }), seed_);
    const counter_stream stream{ key };
    const auto n_words = static_cast<std::size_t>(std::max(1.0, std::floor(2.0 * duration)));
    std::vector<std::string> words;
    words.reserve(n_words);
    for (std::size_t i = 0; i < n_words; ++i) {
        const std::uint64_t bits = stream.bits(i);
        std::string w{ (bits & 3U) == 0 ? pseudo_hindi[(bits >> 8U) % pseudo_hindi.size()]
                                        : pseudo_english[(bits >> 8U) % pseudo_english.size()] };
        if ((bits >> 40U) % 6 == 0 || i + 1 == n_words) {
            w += '.';
        }
        words.push_back(std::move(w));
    }
    return uniform_transcript(words, duration);
}

command_transcription_backend::command_transcription_backend(std::string command, std::string model_id) :
    command_{ std::move(command) },
    model_id_{ std::move(model_id) } {}

bool command_transcription_backend::ready() const {
    return !model_id_.empty() && find_executable(command_).has_value();
}

timed_transcript command_transcription_backend::run(const audio::audio_clip &clip, const transcription_hints &) {
    if (!ready()) {
        throw error{ error_code::backend_unavailable, "transcription command '" + command_ + "' is not available" };
    }
    const std::lock_guard lock{ in_flight_ };
    const std::filesystem::path wav = unique_temp_path("neuro-asr", ".wav");
    write_file_bytes(wav, audio::encode_wav(clip));
    process_result result;
    try {
        result = run_process({ command_, "--model", model_id_, wav.string() });
    } catch (...) {
        std::filesystem::remove(wav);
        throw;
    }
    std::filesystem::remove(wav);
    if (result.exit_code != 0) {
        throw error{ error_code::backend_failure, fmt::format("transcriber exited with {}: {}", result.exit_code, result.standard_error.substr(0, 512)) };
    }
    return parse_command_output(result.standard_output, clip.duration_s());
}

timed_transcript parse_command_output(std::string_view json_text, double duration_s) {
    try {
        const auto doc = nlohmann::json::parse(json_text);
        timed_transcript t;
        t.audio_duration_s = duration_s;
        for (const auto &tok : doc.at("tokens")) {
            std::string text = tok.at("text").get<std::string>();
            // Backends sometimes emit leading spaces or multi-word pieces.
            const std::vector<std::string> words = split_words(text);
            const double start = tok.at("start").get<double>();
            const double end = tok.at("end").get<double>();
            for (std::size_t k = 0; k < words.size(); ++k) {
                const double a = start + (end - start) * static_cast<double>(k) / static_cast<double>(words.size());
                const double b = start + (end - start) * static_cast<double>(k + 1) / static_cast<double>(words.size());
                t.tokens.push_back({ words[k], a, b });
            }
        }
        t.sentences = segment_sentences(t.tokens);
        return t;
    } catch (const nlohmann::json::exception &e) {
        throw error{ error_code::backend_failure, std::string{ "unreadable transcriber output: " } + e.what() };
    }
}

timed_transcript transcribe(const audio::audio_clip &clip, transcription_backend &backend, const transcription_hints &hints) {
    if (clip.sample_rate_hz != audio::pipeline_rate_hz) {
        throw error{ error_code::rate_mismatch, fmt::format("transcription expects {} Hz audio, got {} Hz", audio::pipeline_rate_hz, clip.sample_rate_hz) };
    }
    timed_transcript t;
    try {
        t = backend.run(clip, hints);
    } catch (const error &) {
        throw;
    } catch (const std::exception &e) {
        throw error{ error_code::backend_failure, std::string{ "transcription backend failed: " } + e.what() };
    }
    if (t.sentences.empty() && !t.tokens.empty()) {
        t.sentences = segment_sentences(t.tokens);
    }
    validate(t);
    return t;
}

std::string load_sidecar(const std::filesystem::path &path) {
    return read_text_file(path);
}

std::string to_json_string(const timed_transcript &t) {
    nlohmann::json tokens = nlohmann::json::array();
    for (const timed_token &tok : t.tokens) {
        tokens.push_back({ { "text", tok.text }, { "start", tok.start_s }, { "end", tok.end_s } });
    }
    nlohmann::json sentences = nlohmann::json::array();
    for (const sentence_range &s : t.sentences) {
        sentences.push_back({ s.begin, s.end });
    }
    return nlohmann::json{ { "audio_duration_s", t.audio_duration_s }, { "tokens", tokens }, { "sentences", sentences } }.dump();
}

}  // namespace neuro::transcription
