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

#include "neuro/classifiers/model.hpp"
#include "neuro/rng.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace neuro::classifiers;

struct training_set {
    feature_matrix x;
    std::vector<label> y;
};

// Corpus-sized problem: 48 training rows of fused features.
training_set make_set(std::size_t dim) {
    neuro::rng r{ 3 };
    training_set s{ feature_matrix{ 0, dim }, {} };
    for (std::size_t i = 0; i < 48; ++i) {
        std::vector<double> row(dim);
        for (double &v : row) {
            v = r.normal(i % 2 == 0 ? -0.5 : 0.5, 1.0);
        }
        s.x.push_row(row);
        s.y.push_back(i % 2 == 0 ? label::hc : label::pt);
    }
    return s;
}

void BM_Train(benchmark::State &state) {
    const auto family = static_cast<model_family>(state.range(0));
    const training_set s = make_set(72);
    const model_spec spec = model_spec::defaults(family, feature_kind::fused, 72, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(train(spec, s.x, s.y));
    }
    state.SetLabel(std::string{ to_string(family) });
}
BENCHMARK(BM_Train)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

void BM_PredictProba(benchmark::State &state) {
    const auto family = static_cast<model_family>(state.range(0));
    const training_set s = make_set(72);
    const trained_model m = train(model_spec::defaults(family, feature_kind::fused, 72, 1), s.x, s.y);
    for (auto _ : state) {
        benchmark::DoNotOptimize(predict_proba(m, s.x.row(0)));
    }
    state.SetLabel(std::string{ to_string(family) });
}
BENCHMARK(BM_PredictProba)->DenseRange(0, 4)->Unit(benchmark::kMicrosecond);

}  // namespace
