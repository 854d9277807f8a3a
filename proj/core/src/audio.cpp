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

#include "neuro/audio.hpp"

#include "neuro/byte_io.hpp"
#include "neuro/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace neuro::audio {

namespace {

constexpr std::uint16_t format_pcm = 0x0001;
constexpr std::uint16_t format_ieee_float = 0x0003;
constexpr std::uint16_t format_extensible = 0xFFFE;

struct wav_format {
    std::uint16_t tag{ 0 };
    std::uint16_t channels{ 0 };
    std::uint32_t sample_rate{ 0 };
    std::uint16_t block_align{ 0 };
    std::uint16_t bits_per_sample{ 0 };
};

bool starts_with(std::span<const std::byte> data, std::string_view magic, std::size_t offset = 0) noexcept {
    if (data.size() < offset + magic.size()) {
        return false;
    }
    for (std::size_t i = 0; i < magic.size(); ++i) {
        if (static_cast<char>(data[offset + i]) != magic[i]) {
            return false;
        }
    }
    return true;
}

std::string lowercase(std::string_view s) {
    std::string out{ s };
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool hint_names_non_wav_audio(std::string_view hint) {
    const std::string h = lowercase(hint);
    if (h.find("wav") != std::string::npos || h.find("wave") != std::string::npos) {
        return false;
    }
    static constexpr std::array<std::string_view, 12> known = {
        "mp3", "mpeg", "ogg", "opus", "flac", "webm", "m4a", "mp4", "aac", "aif", "wma", "amr",
    };
    return std::any_of(known.begin(), known.end(), [&](std::string_view k) { return h.find(k) != std::string::npos; });
}

float clip_unit(double v) noexcept {
    return static_cast<float>(std::clamp(v, -1.0, 1.0));
}

wav_format parse_fmt(std::span<const std::byte> chunk) {
    if (chunk.size() < 16) {
        throw error{ error_code::malformed_audio, "fmt chunk shorter than 16 bytes" };
    }
    byte_reader r{ chunk, error_code::malformed_audio };
    wav_format fmt;
    fmt.tag = r.u16();
    fmt.channels = r.u16();
    fmt.sample_rate = r.u32();
    (void) r.u32();  // byte rate
    fmt.block_align = r.u16();
    fmt.bits_per_sample = r.u16();
    if (fmt.tag == format_extensible) {
        if (chunk.size() < 40) {
            throw error{ error_code::malformed_audio, "WAVE_FORMAT_EXTENSIBLE fmt chunk too short" };
        }
        r.skip(2 + 2 + 4 + 4);  // cbSize, valid bits, channel mask
        fmt.tag = r.u16();  // first two bytes of the subformat GUID
    }
    return fmt;
}

double read_sample(byte_reader &r, const wav_format &fmt) {
    if (fmt.tag == format_ieee_float) {
        return fmt.bits_per_sample == 32 ? static_cast<double>(r.f32()) : r.f64();
    }
    switch (fmt.bits_per_sample) {
        case 8: return (static_cast<double>(r.u8()) - 128.0) / 128.0;
        case 16: return static_cast<double>(r.i16()) / 32768.0;
        case 24: {
            const std::uint32_t lo = r.u8();
            const std::uint32_t mid = r.u8();
            const std::uint32_t hi = r.u8();
            std::int32_t v = static_cast<std::int32_t>(lo | (mid << 8U) | (hi << 16U));
            if ((v & 0x800000) != 0) {
                v -= 0x1000000;
            }
            return static_cast<double>(v) / 8388608.0;
        }
        default: return static_cast<double>(r.i32()) / 2147483648.0;
    }
}

void validate_format(const wav_format &fmt) {
    if (fmt.tag != format_pcm && fmt.tag != format_ieee_float) {
        throw error{ error_code::unsupported_format, "WAV codec 0x" + [&] {
                         static constexpr char hex[] = "0123456789abcdef";
                         std::string s(4, '0');
                         for (int i = 0; i < 4; ++i) {
                             s[3 - i] = hex[(fmt.tag >> (4 * i)) & 0xF];
                         }
                         return s;
                     }() + " is not PCM or IEEE float" };
    }
    if (fmt.channels == 0) {
        throw error{ error_code::malformed_audio, "WAV declares zero channels" };
    }
    if (fmt.sample_rate == 0) {
        throw error{ error_code::malformed_audio, "WAV declares a zero sample rate" };
    }
    const bool int_ok = fmt.tag == format_pcm && (fmt.bits_per_sample == 8 || fmt.bits_per_sample == 16 || fmt.bits_per_sample == 24 || fmt.bits_per_sample == 32);
    const bool float_ok = fmt.tag == format_ieee_float && (fmt.bits_per_sample == 32 || fmt.bits_per_sample == 64);
    if (!int_ok && !float_ok) {
        throw error{ error_code::unsupported_format, "unsupported sample width of " + std::to_string(fmt.bits_per_sample) + " bits" };
    }
    const std::size_t frame_bytes = static_cast<std::size_t>(fmt.channels) * (fmt.bits_per_sample / 8U);
    if (fmt.block_align != frame_bytes) {
        throw error{ error_code::malformed_audio, "block_align does not match channels x sample width" };
    }
}

// Modified Bessel function of the first kind, order zero (power series).
double bessel_i0(double x) noexcept {
    double sum = 1.0;
    double term = 1.0;
    const double q = x * x / 4.0;
    for (int k = 1; k < 64; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < sum * 1e-17) {
            break;
        }
    }
    return sum;
}

// Kernel parameters: 16 zero crossings per side, Kaiser beta 8.6, passband
// edge at 94.5% of the lower Nyquist frequency.
constexpr double kernel_zero_crossings = 16.0;
constexpr double kaiser_beta = 8.6;
constexpr double passband_rolloff = 0.945;

class sinc_kernel {
  public:
    sinc_kernel(std::uint32_t source_hz, std::uint32_t target_hz) :
        cutoff_{ passband_rolloff * 0.5 * std::min(1.0, static_cast<double>(target_hz) / source_hz) },
        half_width_{ kernel_zero_crossings / (2.0 * cutoff_) },
        i0_beta_{ bessel_i0(kaiser_beta) } {}

    [[nodiscard]] double half_width() const noexcept { return half_width_; }

    // tau is measured in input samples.
    [[nodiscard]] double operator()(double tau) const noexcept {
        if (std::abs(tau) >= half_width_) {
            return 0.0;
        }
        const double x = 2.0 * cutoff_ * tau;
        const double sinc = x == 0.0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
        const double r = tau / half_width_;
        const double window = bessel_i0(kaiser_beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0_beta_;
        return 2.0 * cutoff_ * sinc * window;
    }

  private:
    double cutoff_;
    double half_width_;
    double i0_beta_;
};

constexpr std::uint64_t max_polyphase_phases = 4096;

}  // namespace

bool looks_like_other_container(std::span<const std::byte> data) noexcept {
    if (starts_with(data, "OggS") || starts_with(data, "fLaC") || starts_with(data, "ID3") || starts_with(data, "FORM") || starts_with(data, "ftyp", 4) || starts_with(data, "#!AMR") || starts_with(data, "\x1A\x45\xDF\xA3")) {
        return true;
    }
    if (starts_with(data, "RIFF") && !starts_with(data, "WAVE", 8)) {
        return true;
    }
    // MPEG audio frame sync: 11 set bits, with a valid layer field.
    if (data.size() >= 2) {
        const auto b0 = static_cast<unsigned>(data[0]);
        const auto b1 = static_cast<unsigned>(data[1]);
        if (b0 == 0xFFU && (b1 & 0xE0U) == 0xE0U && (b1 & 0x06U) != 0) {
            return true;
        }
    }
    return false;
}

audio_clip decode_audio(std::span<const std::byte> data, std::optional<std::string_view> format_hint) {
    if (!starts_with(data, "RIFF") || !starts_with(data, "WAVE", 8)) {
        if (looks_like_other_container(data) || (format_hint && hint_names_non_wav_audio(*format_hint))) {
            throw error{ error_code::unsupported_format, "only RIFF/WAVE audio is accepted" };
        }
        throw error{ error_code::malformed_audio, "data is not a RIFF/WAVE container" };
    }

    byte_reader r{ data, error_code::malformed_audio };
    r.skip(12);

    std::optional<wav_format> fmt;
    std::span<const std::byte> payload;
    bool have_data = false;
    while (r.remaining() >= 8) {
        const std::string id = r.string(4);
        const std::uint32_t size = r.u32();
        if (id == "data") {
            if (size > r.remaining()) {
                throw error{ error_code::malformed_audio, "data chunk truncated: declares " + std::to_string(size) + " bytes, " + std::to_string(r.remaining()) + " present" };
            }
            payload = r.take(size);
            have_data = true;
            break;
        }
        if (size > r.remaining()) {
            throw error{ error_code::malformed_audio, "chunk '" + id + "' truncated" };
        }
        auto body = r.take(size);
        if (id == "fmt ") {
            fmt = parse_fmt(body);
        }
        if ((size & 1U) != 0 && r.remaining() > 0) {
            r.skip(1);  // chunks are word aligned
        }
    }
    if (!fmt) {
        throw error{ error_code::malformed_audio, "missing fmt chunk" };
    }
    validate_format(*fmt);
    if (!have_data) {
        throw error{ error_code::malformed_audio, "missing data chunk" };
    }

    const std::size_t frames = payload.size() / fmt->block_align;
    if (frames == 0) {
        throw error{ error_code::malformed_audio, "WAV contains no samples" };
    }
    if (payload.size() % fmt->block_align != 0) {
        throw error{ error_code::malformed_audio, "data chunk ends mid-frame" };
    }

    byte_reader samples{ payload, error_code::malformed_audio };
    std::vector<float> interleaved(frames * fmt->channels);
    for (float &s : interleaved) {
        const double v = read_sample(samples, *fmt);
        if (!std::isfinite(v)) {
            throw error{ error_code::malformed_audio, "non-finite float sample" };
        }
        s = clip_unit(v);
    }

    audio_clip clip;
    clip.sample_rate_hz = fmt->sample_rate;
    clip.samples = fmt->channels == 1 ? std::move(interleaved) : downmix(interleaved, fmt->channels);
    return clip;
}

std::vector<float> downmix(std::span<const float> interleaved, std::size_t channels) {
    if (channels == 0) {
        throw error{ error_code::invalid_argument, "downmix with zero channels" };
    }
    const std::size_t frames = interleaved.size() / channels;
    std::vector<float> mono(frames);
    for (std::size_t f = 0; f < frames; ++f) {
        double sum = 0.0;
        for (std::size_t c = 0; c < channels; ++c) {
            sum += interleaved[f * channels + c];
        }
        mono[f] = static_cast<float>(sum / static_cast<double>(channels));
    }
    return mono;
}

std::vector<std::byte> encode_wav_interleaved(std::span<const float> interleaved, std::uint16_t channels,
                                              std::uint32_t sample_rate_hz, wav_encoding encoding) {
    if (channels == 0 || sample_rate_hz == 0) {
        throw error{ error_code::invalid_argument, "WAV needs at least one channel and a positive rate" };
    }
    const std::uint16_t bits = encoding == wav_encoding::pcm16 ? 16 : 32;
    const std::uint16_t block_align = static_cast<std::uint16_t>(channels * bits / 8);
    const auto data_bytes = static_cast<std::uint32_t>(interleaved.size() * (bits / 8U));

    byte_writer w;
    w.put_string("RIFF");
    w.put_u32(36 + data_bytes);
    w.put_string("WAVE");
    w.put_string("fmt ");
    w.put_u32(16);
    w.put_u16(encoding == wav_encoding::pcm16 ? format_pcm : format_ieee_float);
    w.put_u16(channels);
    w.put_u32(sample_rate_hz);
    w.put_u32(sample_rate_hz * block_align);
    w.put_u16(block_align);
    w.put_u16(bits);
    w.put_string("data");
    w.put_u32(data_bytes);
    for (const float s : interleaved) {
        if (encoding == wav_encoding::pcm16) {
            const double scaled = std::round(static_cast<double>(s) * 32768.0);
            w.put_i16(static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0)));
        } else {
            w.put_f32(s);
        }
    }
    return w.release();
}

std::vector<std::byte> encode_wav(const audio_clip &clip, wav_encoding encoding) {
    return encode_wav_interleaved(clip.samples, 1, clip.sample_rate_hz, encoding);
}

std::size_t resampled_length(std::size_t input_length, std::uint32_t source_hz, std::uint32_t target_hz) noexcept {
    const double exact = static_cast<double>(input_length) * target_hz / source_hz;
    return static_cast<std::size_t>(std::llround(exact));
}

audio_clip resample(const audio_clip &clip, std::uint32_t target_hz) {
    if (target_hz < 1000) {
        throw error{ error_code::invalid_rate, "target rate " + std::to_string(target_hz) + " Hz is below 1000 Hz" };
    }
    if (clip.sample_rate_hz == 0) {
        throw error{ error_code::invalid_rate, "clip has a zero sample rate" };
    }
    if (clip.sample_rate_hz == target_hz) {
        return clip;
    }

    const std::uint64_t g = std::gcd(clip.sample_rate_hz, target_hz);
    const std::uint64_t up = target_hz / g;             // output samples per period
    const std::uint64_t down = clip.sample_rate_hz / g;  // input samples per period
    const sinc_kernel kernel{ clip.sample_rate_hz, target_hz };
    const auto reach = static_cast<std::int64_t>(std::ceil(kernel.half_width()));
    const std::size_t taps = static_cast<std::size_t>(2 * reach + 1);

    const std::span<const float> in{ clip.samples };
    const auto n_in = static_cast<std::int64_t>(in.size());
    const std::size_t n_out = resampled_length(in.size(), clip.sample_rate_hz, target_hz);

    // Output j sits at input position j * down / up = base + phase / up.
    std::vector<double> table;
    const bool polyphase = up <= max_polyphase_phases;
    if (polyphase) {
        table.resize(up * taps);
        for (std::uint64_t phase = 0; phase < up; ++phase) {
            const double frac = static_cast<double>(phase) / static_cast<double>(up);
            for (std::size_t t = 0; t < taps; ++t) {
                const auto k = static_cast<std::int64_t>(t) - reach;
                table[phase * taps + t] = kernel(frac - static_cast<double>(k));
            }
        }
    }

    audio_clip out;
    out.sample_rate_hz = target_hz;
    out.source_id = clip.source_id;
    out.samples.resize(n_out);
    std::vector<double> scratch(polyphase ? 0 : taps);
    for (std::size_t j = 0; j < n_out; ++j) {
        const std::uint64_t num = static_cast<std::uint64_t>(j) * down;
        const auto base = static_cast<std::int64_t>(num / up);
        const std::uint64_t phase = num % up;
        const double *coeffs = nullptr;
        if (polyphase) {
            coeffs = &table[phase * taps];
        } else {
            const double frac = static_cast<double>(phase) / static_cast<double>(up);
            for (std::size_t t = 0; t < taps; ++t) {
                scratch[t] = kernel(frac - static_cast<double>(static_cast<std::int64_t>(t) - reach));
            }
            coeffs = scratch.data();
        }
        double acc = 0.0;
        const std::int64_t first = base - reach;
        const std::size_t t_begin = static_cast<std::size_t>(std::max<std::int64_t>(0, -first));
        const std::size_t t_end = static_cast<std::size_t>(std::clamp<std::int64_t>(n_in - first, 0, static_cast<std::int64_t>(taps)));
        for (std::size_t t = t_begin; t < t_end; ++t) {
            acc += coeffs[t] * in[static_cast<std::size_t>(first + static_cast<std::int64_t>(t))];
        }
        out.samples[j] = clip_unit(acc);
    }
    return out;
}

audio_clip load_for_pipeline(std::span<const std::byte> data, std::optional<std::string_view> format_hint) {
    return resample(decode_audio(data, format_hint), pipeline_rate_hz);
}

}  // namespace neuro::audio
