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

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <cstring>
#include <numbers>
#include <string>

namespace {

using namespace neuro;
using audio::audio_clip;

std::vector<std::byte> bytes_of(std::string_view s) {
    std::vector<std::byte> out(s.size());
    std::memcpy(out.data(), s.data(), s.size());
    return out;
}

std::vector<float> sine(double freq, double rate, std::size_t n, double amp = 0.5) {
    std::vector<float> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = static_cast<float>(amp * std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(i) / rate));
    }
    return out;
}

// Hand-assembled RIFF header, independent of the library encoder.
std::vector<std::byte> raw_wav(std::uint16_t format, std::uint16_t channels, std::uint32_t rate, std::uint16_t bits, const std::vector<std::byte> &data) {
    byte_writer w;
    w.put_string("RIFF");
    w.put_u32(static_cast<std::uint32_t>(36 + data.size()));
    w.put_string("WAVEfmt ");
    w.put_u32(16);
    w.put_u16(format);
    w.put_u16(channels);
    w.put_u32(rate);
    w.put_u32(rate * channels * bits / 8);
    w.put_u16(static_cast<std::uint16_t>(channels * bits / 8));
    w.put_u16(bits);
    w.put_string("data");
    w.put_u32(static_cast<std::uint32_t>(data.size()));
    w.put_bytes(data);
    return w.release();
}

error_code code_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const error &e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an error";
    return error_code::invalid_argument;
}

TEST(Decode, SilentSecondIsAllZero) {
    audio_clip clip;
    clip.samples.assign(16000, 0.0F);
    const audio_clip out = audio::decode_audio(audio::encode_wav(clip));
    ASSERT_EQ(out.samples.size(), 16000U);
    EXPECT_EQ(out.sample_rate_hz, 16000U);
    for (const float s : out.samples) {
        ASSERT_EQ(s, 0.0F);
    }
}

TEST(Decode, SymmetricStereoDownmixesToZero) {
    std::vector<float> interleaved;
    for (int i = 0; i < 1000; ++i) {
        interleaved.push_back(0.5F);
        interleaved.push_back(-0.5F);
    }
    const audio_clip out = audio::decode_audio(audio::encode_wav_interleaved(interleaved, 2, 22050));
    ASSERT_EQ(out.samples.size(), 1000U);
    for (const float s : out.samples) {
        ASSERT_EQ(s, 0.0F);
    }
}

TEST(Decode, IdenticalChannelsDownmixExactly) {
    const std::vector<float> mono = sine(300.0, 16000.0, 800, 0.7);
    std::vector<float> interleaved;
    for (const float s : mono) {
        for (int c = 0; c < 3; ++c) {
            interleaved.push_back(s);
        }
    }
    const std::vector<float> mixed = audio::downmix(interleaved, 3);
    ASSERT_EQ(mixed, mono);
}

TEST(Decode, Pcm16RoundTripWithinOneStep) {
    audio_clip clip;
    clip.samples = sine(1234.0, 16000.0, 4000, 0.9);
    clip.samples.push_back(1.0F);
    clip.samples.push_back(-1.0F);
    const audio_clip out = audio::decode_audio(audio::encode_wav(clip));
    ASSERT_EQ(out.samples.size(), clip.samples.size());
    for (std::size_t i = 0; i < clip.samples.size(); ++i) {
        ASSERT_NEAR(out.samples[i], clip.samples[i], 1.0 / 32768.0) << i;
    }
}

TEST(Decode, Float32RoundTripIsExact) {
    audio_clip clip;
    clip.samples = sine(97.0, 8000.0, 2000, 0.8);
    clip.sample_rate_hz = 8000;
    const audio_clip out = audio::decode_audio(audio::encode_wav(clip, audio::wav_encoding::float32));
    EXPECT_EQ(out.sample_rate_hz, 8000U);
    EXPECT_EQ(out.samples, clip.samples);
}

TEST(Decode, HandBuiltPcmVariants) {
    // 8-bit unsigned: 128 is zero, 255 is +127/128.
    {
        const std::vector<std::byte> data{ std::byte{ 128 }, std::byte{ 255 }, std::byte{ 0 } };
        const audio_clip c = audio::decode_audio(raw_wav(1, 1, 8000, 8, data));
        ASSERT_EQ(c.samples.size(), 3U);
        EXPECT_FLOAT_EQ(c.samples[0], 0.0F);
        EXPECT_FLOAT_EQ(c.samples[1], 127.0F / 128.0F);
        EXPECT_FLOAT_EQ(c.samples[2], -1.0F);
    }
    // 24-bit signed little-endian: 0x400000 is +0.5.
    {
        const std::vector<std::byte> data{ std::byte{ 0x00 }, std::byte{ 0x00 }, std::byte{ 0x40 }, std::byte{ 0x00 }, std::byte{ 0x00 }, std::byte{ 0xC0 } };
        const audio_clip c = audio::decode_audio(raw_wav(1, 1, 8000, 24, data));
        ASSERT_EQ(c.samples.size(), 2U);
        EXPECT_FLOAT_EQ(c.samples[0], 0.5F);
        EXPECT_FLOAT_EQ(c.samples[1], -0.5F);
    }
    // 64-bit float above full scale is clipped.
    {
        byte_writer w;
        w.put_f64(0.25);
        w.put_f64(3.0);
        const audio_clip c = audio::decode_audio(raw_wav(3, 1, 8000, 64, w.release()));
        ASSERT_EQ(c.samples.size(), 2U);
        EXPECT_FLOAT_EQ(c.samples[0], 0.25F);
        EXPECT_FLOAT_EQ(c.samples[1], 1.0F);
    }
}

TEST(Decode, TextIsMalformed) {
    EXPECT_EQ(code_of([] { (void)audio::decode_audio(bytes_of("this is not audio at all, just a note")); }), error_code::malformed_audio);
}

TEST(Decode, TruncatedHeaderIsMalformed) {
    audio_clip clip;
    clip.samples.assign(100, 0.1F);
    std::vector<std::byte> wav = audio::encode_wav(clip);
    wav.resize(30);
    EXPECT_EQ(code_of([&] { (void)audio::decode_audio(wav); }), error_code::malformed_audio);
}

TEST(Decode, OtherContainersAreUnsupported) {
    for (const std::string_view head : { std::string_view{ "OggS\0\x02\0\0\0\0\0\0\0\0", 14 }, std::string_view{ "fLaC\0\0\0\x22\x10\0\x10\0", 12 },
                                         std::string_view{ "ID3\x04\0\0\0\0\0\0\0\0", 12 } }) {
        const auto data = bytes_of(head);
        EXPECT_TRUE(audio::looks_like_other_container(data));
        EXPECT_EQ(code_of([&] { (void)audio::decode_audio(data); }), error_code::unsupported_format);
    }
}

TEST(Decode, CompressedWavCodecIsUnsupported) {
    const std::vector<std::byte> data(64, std::byte{ 0 });
    EXPECT_EQ(code_of([&] { (void)audio::decode_audio(raw_wav(0x55, 1, 8000, 16, data)); }), error_code::unsupported_format);
}

TEST(Resample, LengthContract) {
    audio_clip clip;
    clip.sample_rate_hz = 32000;
    clip.samples.assign(32000, 0.0F);
    const audio_clip out = audio::resample(clip, 16000);
    EXPECT_EQ(out.sample_rate_hz, 16000U);
    EXPECT_NEAR(static_cast<double>(out.samples.size()), 16000.0, 1.0);

    for (const std::uint32_t src : { 8000U, 11025U, 22050U, 44100U, 48000U, 96000U, 12345U }) {
        for (const std::size_t n : { std::size_t{ 1 }, std::size_t{ 997 }, std::size_t{ 20000 } }) {
            audio_clip c;
            c.sample_rate_hz = src;
            c.samples.assign(n, 0.1F);
            const audio_clip r = audio::resample(c, 16000);
            const double expected = std::round(static_cast<double>(n) * 16000.0 / src);
            EXPECT_NEAR(static_cast<double>(r.samples.size()), expected, 1.0) << src << " " << n;
            EXPECT_EQ(audio::resample(r, 16000).samples.size(), r.samples.size());
        }
    }
}

TEST(Resample, SameRateIsIdentity) {
    audio_clip clip;
    clip.samples = sine(200.0, 16000.0, 3000);
    const audio_clip out = audio::resample(clip, 16000);
    EXPECT_EQ(out.samples, clip.samples);
}

TEST(Resample, RejectsTinyTargetRate) {
    audio_clip clip;
    clip.samples.assign(100, 0.0F);
    EXPECT_EQ(code_of([&] { (void)audio::resample(clip, 999); }), error_code::invalid_rate);
}

// Naive DFT magnitude, independent of the library FFT.
double dft_magnitude(const std::vector<float> &x, double freq, double rate) {
    std::complex<double> acc{ 0.0, 0.0 };
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double angle = -2.0 * std::numbers::pi * freq * static_cast<double>(i) / rate;
        acc += static_cast<double>(x[i]) * std::complex<double>{ std::cos(angle), std::sin(angle) };
    }
    return std::abs(acc);
}

TEST(Resample, ToneKeepsItsFrequency) {
    audio_clip clip;
    clip.sample_rate_hz = 44100;
    clip.samples = sine(440.0, 44100.0, 44100);
    const audio_clip out = audio::resample(clip, 16000);
    double best_freq = 0.0;
    double best_mag = -1.0;
    // 0.5 Hz grid from 50 Hz to 2 kHz.
    for (double f = 50.0; f <= 2000.0; f += 0.5) {
        const double m = dft_magnitude(out.samples, f, 16000.0);
        if (m > best_mag) {
            best_mag = m;
            best_freq = f;
        }
    }
    EXPECT_NEAR(best_freq, 440.0, 2.0);
}

TEST(Resample, ToneEnergyPreserved) {
    for (const double freq : { 440.0, 1000.0, 3000.0, 6000.0 }) {
        audio_clip clip;
        clip.sample_rate_hz = 44100;
        clip.samples = sine(freq, 44100.0, 44100);
        const audio_clip out = audio::resample(clip, 16000);
        const auto mean_square = [](const std::vector<float> &v) {
            double s = 0.0;
            for (const float x : v) {
                s += static_cast<double>(x) * x;
            }
            return s / static_cast<double>(v.size());
        };
        const double before = mean_square(clip.samples);
        const double after = mean_square(out.samples);
        EXPECT_NEAR(after / before, 1.0, 0.05) << freq;
    }
}

TEST(Resample, UpsamplingKeepsTone) {
    audio_clip clip;
    clip.sample_rate_hz = 8000;
    clip.samples = sine(440.0, 8000.0, 8000);
    const audio_clip out = audio::resample(clip, 16000);
    ASSERT_EQ(out.samples.size(), 16000U);
    EXPECT_GT(dft_magnitude(out.samples, 440.0, 16000.0), 100.0 * dft_magnitude(out.samples, 3560.0, 16000.0));
}

TEST(LoadForPipeline, DecodesAndResamples) {
    audio_clip clip;
    clip.sample_rate_hz = 48000;
    clip.samples = sine(440.0, 48000.0, 48000);
    const audio_clip out = audio::load_for_pipeline(audio::encode_wav(clip));
    EXPECT_EQ(out.sample_rate_hz, audio::pipeline_rate_hz);
    EXPECT_EQ(out.samples.size(), 16000U);
    for (const float s : out.samples) {
        ASSERT_LE(std::abs(s), 1.0F);
    }
}

}  // namespace
