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

#include "neuro/error.hpp"
#include "neuro/paralinguistic.hpp"
#include "neuro/process.hpp"
#include "neuro/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>

namespace {

using namespace neuro;
using namespace neuro::paralinguistic;

audio::audio_clip noisy_tone(double seconds, std::uint64_t seed) {
    neuro::rng r{ seed };
    audio::audio_clip clip;
    const auto n = static_cast<std::size_t>(seconds * 16000);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / 16000.0;
        clip.samples.push_back(static_cast<float>(0.4 * std::sin(2.0 * std::numbers::pi * 210.0 * t) + r.normal(0.0, 0.02)));
    }
    return clip;
}

error_code code_of(auto &&fn) {
    try {
        fn();
    } catch (const error &e) {
        return e.code();
    }
    return error_code::invalid_argument;
}

TEST(StubEmbedding, OneSecondGivesTwoFrames) {
    stub_embedding_backend stub;
    const frame_embeddings f = embed(noisy_tone(1.0, 1), stub);
    EXPECT_EQ(f.frames, 2U);
    EXPECT_EQ(f.embedding_dim, 64U);
    EXPECT_EQ(f.values.size(), 128U);
}

TEST(StubEmbedding, ShortClipHasOneFrame) {
    stub_embedding_backend stub;
    EXPECT_EQ(embed(noisy_tone(0.3, 1), stub).frames, 1U);
}

TEST(StubEmbedding, Deterministic) {
    stub_embedding_backend a{ 5 };
    stub_embedding_backend b{ 5 };
    const audio::audio_clip clip = noisy_tone(2.2, 9);
    EXPECT_EQ(embed(clip, a), embed(clip, b));
}

TEST(StubEmbedding, SingleSampleChangeAltersOutput) {
    stub_embedding_backend stub;
    audio::audio_clip clip = noisy_tone(1.5, 2);
    const frame_embeddings before = embed(clip, stub);
    clip.samples[12345] += 1e-3F;
    const frame_embeddings after = embed(clip, stub);
    EXPECT_NE(before, after);
}

TEST(StubEmbedding, SeedChangesOutput) {
    stub_embedding_backend a{ 0 };
    stub_embedding_backend b{ 1 };
    const audio::audio_clip clip = noisy_tone(1.0, 3);
    EXPECT_NE(embed(clip, a), embed(clip, b));
    EXPECT_NE(a.identity(), b.identity());
}

TEST(StubEmbedding, ValuesBounded) {
    stub_embedding_backend stub{ 4, 32 };
    const frame_embeddings f = embed(noisy_tone(3.0, 4), stub);
    EXPECT_EQ(f.embedding_dim, 32U);
    for (const float v : f.values) {
        EXPECT_TRUE(std::isfinite(v));
        EXPECT_LE(std::abs(v), 1.0F);
    }
}

TEST(StubEmbedding, TooShortAndWrongRate) {
    stub_embedding_backend stub;
    EXPECT_EQ(code_of([&] { (void)embed(noisy_tone(0.05, 1), stub); }), error_code::clip_too_short);
    audio::audio_clip clip = noisy_tone(1.0, 1);
    clip.sample_rate_hz = 44100;
    EXPECT_EQ(code_of([&] { (void)embed(clip, stub); }), error_code::rate_mismatch);
}

TEST(Pooling, MatchesColumnMeans) {
    neuro::rng r{ 77 };
    frame_embeddings f;
    f.frames = 5;
    f.embedding_dim = 8;
    for (std::size_t i = 0; i < 40; ++i) {
        f.values.push_back(static_cast<float>(r.normal()));
    }
    const paralinguistic_embedding pooled = pool_embedding(f);
    ASSERT_EQ(pooled.embedding_dim(), 8U);
    for (std::size_t d = 0; d < 8; ++d) {
        long double sum = 0;
        for (std::size_t t = 0; t < 5; ++t) {
            sum += f.values[t * 8 + d];
        }
        EXPECT_NEAR(pooled.values[d], static_cast<double>(sum / 5), 1e-12);
    }
}

TEST(Pooling, FramePermutationInvariant) {
    neuro::rng r{ 78 };
    frame_embeddings f;
    f.frames = 7;
    f.embedding_dim = 6;
    for (std::size_t i = 0; i < 42; ++i) {
        f.values.push_back(static_cast<float>(r.uniform(-1.0, 1.0)));
    }
    frame_embeddings g = f;
    std::vector<std::size_t> order{ 6, 2, 0, 5, 3, 1, 4 };
    for (std::size_t t = 0; t < 7; ++t) {
        std::copy_n(f.values.begin() + static_cast<std::ptrdiff_t>(order[t] * 6), 6, g.values.begin() + static_cast<std::ptrdiff_t>(t * 6));
    }
    EXPECT_EQ(pool_embedding(f), pool_embedding(g));
}

TEST(Pooling, RepeatedFrameGivesThatFrame) {
    frame_embeddings f;
    f.frames = 4;
    f.embedding_dim = 3;
    for (int k = 0; k < 4; ++k) {
        f.values.insert(f.values.end(), { 0.25F, -0.5F, 0.125F });
    }
    const paralinguistic_embedding pooled = pool_embedding(f);
    EXPECT_DOUBLE_EQ(pooled.values[0], 0.25);
    EXPECT_DOUBLE_EQ(pooled.values[1], -0.5);
    EXPECT_DOUBLE_EQ(pooled.values[2], 0.125);
}

TEST(Pooling, EmptyFramesRejected) {
    frame_embeddings f;
    f.embedding_dim = 4;
    EXPECT_EQ(code_of([&] { (void)pool_embedding(f); }), error_code::empty_frames);
}

TEST(Neuemb, RoundTrip) {
    stub_embedding_backend stub;
    const frame_embeddings f = embed(noisy_tone(1.7, 5), stub);
    EXPECT_EQ(parse_neuemb(serialize_neuemb(f)), f);
}

TEST(Neuemb, TruncatedIsRejected) {
    stub_embedding_backend stub;
    auto bytes = serialize_neuemb(embed(noisy_tone(1.0, 5), stub));
    bytes.resize(bytes.size() - 3);
    EXPECT_THROW((void)parse_neuemb(bytes), error);
}

class counting_backend final : public embedding_backend {
  public:
    std::string_view kind() const noexcept override { return "stub"; }
    bool ready() const override { return true; }
    std::size_t embedding_dim() const noexcept override { return inner.embedding_dim(); }
    double min_window_s() const noexcept override { return 0.1; }
    std::string identity() const override { return inner.identity(); }
    frame_embeddings run(const audio::audio_clip &clip) override {
        ++calls;
        return inner.run(clip);
    }
    stub_embedding_backend inner;
    int calls{ 0 };
};

TEST(CachedBackend, SecondRunHitsCache) {
    const auto dir = unique_temp_path("neuro-embcache-", "");
    auto counter = std::make_shared<counting_backend>();
    cached_embedding_backend cached{ counter, dir };
    const audio::audio_clip clip = noisy_tone(1.2, 6);
    const frame_embeddings first = embed(clip, cached);
    const frame_embeddings second = embed(clip, cached);
    EXPECT_EQ(first, second);
    EXPECT_EQ(counter->calls, 1);
    EXPECT_TRUE(std::filesystem::exists(cached.cache_path(clip)));
    std::filesystem::remove_all(dir);
}

TEST(EmbedCommandBackend, MissingExecutableIsUnavailable) {
    command_embedding_backend backend{ "/nonexistent/neuro-embed", "model" };
    EXPECT_FALSE(backend.ready());
    EXPECT_EQ(code_of([&] { (void)embed(noisy_tone(1.0, 1), backend); }), error_code::backend_unavailable);
}

}  // namespace
