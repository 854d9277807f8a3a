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
#include "neuro/pipeline.hpp"
#include "neuro/rng.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

namespace {

neuro::audio::audio_clip voiced(double seconds) {
    neuro::rng r{ 2 };
    neuro::audio::audio_clip clip;
    const auto n = static_cast<std::size_t>(16000 * seconds);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / 16000.0;
        clip.samples.push_back(static_cast<float>(0.4 * std::sin(2.0 * std::numbers::pi * 230.0 * t) + r.normal(0.0, 0.02)));
    }
    return clip;
}

void BM_StubEmbedding(benchmark::State &state) {
    const auto clip = voiced(static_cast<double>(state.range(0)));
    neuro::paralinguistic::stub_embedding_backend stub;
    for (auto _ : state) {
        benchmark::DoNotOptimize(neuro::paralinguistic::pool_embedding(neuro::paralinguistic::embed(clip, stub)));
    }
}
BENCHMARK(BM_StubEmbedding)->Arg(3)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_ExtractFeatures(benchmark::State &state) {
    const auto clip = voiced(static_cast<double>(state.range(0)));
    const auto backends = neuro::pipeline::make_backends({});
    neuro::transcription::transcription_hints hints;
    hints.sidecar_text = "I want the ball abhi please. mujhe red wala chahiye. then we go outside.";
    for (auto _ : state) {
        benchmark::DoNotOptimize(neuro::pipeline::extract_features(clip, backends, hints));
    }
}
BENCHMARK(BM_ExtractFeatures)->Arg(3)->Arg(30)->Unit(benchmark::kMillisecond);

}  // namespace
