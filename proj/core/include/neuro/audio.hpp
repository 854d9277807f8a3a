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

#ifndef NEURO_AUDIO_HPP_
#define NEURO_AUDIO_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace neuro::audio {

/// Sample rate every downstream stage expects.
inline constexpr std::uint32_t pipeline_rate_hz = 16000;

/// Mono PCM buffer. Amplitudes are normalized floats clipped to [-1, 1].
struct audio_clip {
    std::vector<float> samples;
    std::uint32_t sample_rate_hz{ pipeline_rate_hz };
    std::string source_id;

    [[nodiscard]] double duration_s() const noexcept {
        return sample_rate_hz == 0 ? 0.0 : static_cast<double>(samples.size()) / sample_rate_hz;
    }
};

enum class wav_encoding {
    pcm16,
    float32,
};

/**
 * Decodes a RIFF/WAVE container (integer PCM of 8/16/24/32 bits, or IEEE
 * float of 32/64 bits) and downmixes it to mono by channel mean.
 *
 * Throws error_code::unsupported_format for recognizable non-WAV containers
 * and WAV files with a compressed codec; error_code::malformed_audio for
 * anything else that fails to parse (bad header, truncated data, no samples).
 * `format_hint` is a file extension or MIME type from the uploader; it only
 * sharpens the diagnosis for inputs that are not RIFF at all.
 */
[[nodiscard]] audio_clip decode_audio(std::span<const std::byte> data,
                                      std::optional<std::string_view> format_hint = std::nullopt);

/// Writes a canonical 44-byte-header WAV. pcm16 maps [-1, 1] onto
/// round(x * 32768) clamped to the int16 range.
[[nodiscard]] std::vector<std::byte> encode_wav(const audio_clip &clip, wav_encoding encoding = wav_encoding::pcm16);

/// Multi-channel variant used by fixtures and the synthetic generator.
[[nodiscard]] std::vector<std::byte> encode_wav_interleaved(std::span<const float> interleaved, std::uint16_t channels,
                                                            std::uint32_t sample_rate_hz,
                                                            wav_encoding encoding = wav_encoding::pcm16);

/// Arithmetic mean across channels of an interleaved buffer.
[[nodiscard]] std::vector<float> downmix(std::span<const float> interleaved, std::size_t channels);

/// True when the bytes start like a container we know is not WAV (Ogg, FLAC,
/// MP3, Matroska/WebM, MP4, AIFF).
[[nodiscard]] bool looks_like_other_container(std::span<const std::byte> data) noexcept;

/// Output length contract of resample(): round(n * target / source).
[[nodiscard]] std::size_t resampled_length(std::size_t input_length, std::uint32_t source_hz, std::uint32_t target_hz) noexcept;

/**
 * Band-limited resampling with a Kaiser-windowed sinc kernel. Rational
 * ratios with a small numerator use a precomputed polyphase table; other
 * ratios evaluate the kernel per output sample. A clip already at
 * `target_hz` is returned unchanged.
 *
 * Throws error_code::invalid_rate when target_hz < 1000.
 */
[[nodiscard]] audio_clip resample(const audio_clip &clip, std::uint32_t target_hz = pipeline_rate_hz);

/// decode_audio followed by resample to the pipeline rate.
[[nodiscard]] audio_clip load_for_pipeline(std::span<const std::byte> data,
                                           std::optional<std::string_view> format_hint = std::nullopt);

}  // namespace neuro::audio

#endif  // NEURO_AUDIO_HPP_
