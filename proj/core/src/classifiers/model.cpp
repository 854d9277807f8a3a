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

#include "neuro/classifiers/neural.hpp"
#include "neuro/classifiers/random_forest.hpp"
#include "neuro/classifiers/svm.hpp"
#include "neuro/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>

namespace neuro::classifiers {

namespace {

constexpr std::uint64_t svm_stream = 0x53564DULL;
constexpr std::uint64_t rf_stream = 0x5246ULL;
constexpr std::uint64_t init_stream = 0x1417ULL;
constexpr std::uint64_t epoch_stream = 0xE90CULL;

void require_finite(std::span<const double> values) {
    if (!std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); })) {
        throw error{ error_code::non_finite_input, "input contains NaN or infinite values" };
    }
}

}  // namespace

std::vector<double> encode_labels(std::span<const label> labels) {
    std::vector<double> out;
    out.reserve(labels.size());
    for (const label l : labels) {
        out.push_back(encode(l));
    }
    return out;
}

std::vector<double> fuse_features(const linguistic::linguistic_features &ling, const paralinguistic::paralinguistic_embedding &para) {
    const auto head = ling.to_array();
    std::vector<double> out(head.begin(), head.end());
    out.insert(out.end(), para.values.begin(), para.values.end());
    return out;
}

trained_model train(const model_spec &spec, const feature_matrix &features, std::span<const label> labels) {
    if (features.rows() != labels.size()) {
        throw error{ error_code::length_mismatch, fmt::format("{} feature rows but {} labels", features.rows(), labels.size()) };
    }
    if (spec.input_dim == 0 || features.cols() != spec.input_dim) {
        throw error{ error_code::dimension_mismatch, fmt::format("spec expects {} features, matrix has {}", spec.input_dim, features.cols()) };
    }
    const auto pt = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label::pt));
    if (labels.size() < 2 || pt == 0 || pt == labels.size()) {
        throw error{ error_code::degenerate_labels, "training requires at least one PT and one HC sample" };
    }
    require_finite(features.data());

    trained_model model;
    model.spec = spec;
    model.metadata.training_rows = features.rows();
    model.metadata.scaler = standardizer::fit(features);
    const feature_matrix z = model.metadata.scaler.apply(features);
    const std::vector<double> targets = encode_labels(labels);

    switch (spec.family) {
        case model_family::svm:
            model.body = std::make_shared<svm_estimator>(svm_estimator::fit(z, targets, std::get<svm_params>(spec.params), hash_combine(spec.seed, svm_stream)));
            break;
        case model_family::rf:
            model.body = std::make_shared<random_forest_estimator>(random_forest_estimator::fit(z, targets, std::get<rf_params>(spec.params), hash_combine(spec.seed, rf_stream)));
            break;
        case model_family::rnn:
        case model_family::cnn:
        case model_family::transformer: {
            rng init{ hash_combine(spec.seed, init_stream) };
            std::unique_ptr<network> net = make_network(spec, init);
            const training_trace trace = train_network(*net, z, targets, *spec.optimizer(), hash_combine(spec.seed, epoch_stream));
            model.metadata.epochs_run = trace.epochs_run;
            model.metadata.epoch_loss = trace.epoch_loss;
            model.body = std::make_shared<neural_estimator>(std::move(net));
            break;
        }
    }
    model.created_at = utc_timestamp_now();
    return model;
}

double predict_proba(const trained_model &model, std::span<const double> x) {
    if (x.size() != model.spec.input_dim) {
        throw error{ error_code::dimension_mismatch, fmt::format("model expects {} features, got {}", model.spec.input_dim, x.size()) };
    }
    require_finite(x);
    const std::vector<double> z = model.metadata.scaler.apply(x);
    return std::clamp(model.body->predict_proba(z), 0.0, 1.0);
}

label classify(const trained_model &model, std::span<const double> x) {
    return threshold(predict_proba(model, x));
}

std::string utc_timestamp_now() {
    const auto now = std::chrono::time_point_cast<std::chrono::milliseconds>(std::chrono::system_clock::now());
    const auto ms = now.time_since_epoch().count() % 1000;
    const std::time_t seconds = std::chrono::system_clock::to_time_t(now);
    std::tm utc{};
    gmtime_r(&seconds, &utc);
    return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}.{:03d}Z", utc.tm_year + 1900, utc.tm_mon + 1, utc.tm_mday, utc.tm_hour, utc.tm_min, utc.tm_sec, ms);
}

}  // namespace neuro::classifiers
