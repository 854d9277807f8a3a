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

#include "neuro/classifiers/types.hpp"

#include "neuro/error.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

namespace neuro::classifiers {

namespace {

std::string lower(std::string_view s) {
    std::string out{ s };
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

std::string_view to_string(const model_family family) noexcept {
    switch (family) {
        case model_family::svm: return "SVM";
        case model_family::rf: return "RF";
        case model_family::rnn: return "RNN";
        case model_family::cnn: return "CNN";
        case model_family::transformer: return "TRANSFORMER";
    }
    return "?";
}

std::string_view to_string(const feature_kind kind) noexcept {
    switch (kind) {
        case feature_kind::linguistic: return "LINGUISTIC";
        case feature_kind::paralinguistic: return "PARALINGUISTIC";
        case feature_kind::fused: return "FUSED";
    }
    return "?";
}

std::string_view to_string(const label l) noexcept {
    return l == label::pt ? "PT" : "HC";
}

model_family parse_family(std::string_view name) {
    const std::string n = lower(name);
    for (const model_family f : all_families) {
        if (lower(to_string(f)) == n) {
            return f;
        }
    }
    throw error{ error_code::invalid_argument, "unknown model family '" + std::string{ name } + "'" };
}

feature_kind parse_feature_kind(std::string_view name) {
    const std::string n = lower(name);
    for (const feature_kind k : all_feature_kinds) {
        if (lower(to_string(k)) == n) {
            return k;
        }
    }
    throw error{ error_code::invalid_argument, "unknown feature kind '" + std::string{ name } + "'" };
}

label parse_label(std::string_view name) {
    const std::string n = lower(name);
    if (n == "pt" || n == "1") {
        return label::pt;
    }
    if (n == "hc" || n == "0") {
        return label::hc;
    }
    throw error{ error_code::invalid_argument, "unknown label '" + std::string{ name } + "'" };
}

void feature_matrix::push_row(std::span<const double> values) {
    if (rows_ == 0 && data_.empty()) {
        cols_ = values.size();
    }
    if (values.size() != cols_) {
        throw error{ error_code::dimension_mismatch, "row width " + std::to_string(values.size()) + " does not match " + std::to_string(cols_) };
    }
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
}

hyperparams default_hyperparams(const model_family family) {
    switch (family) {
        case model_family::svm: return svm_params{};
        case model_family::rf: return rf_params{};
        case model_family::rnn: return rnn_params{};
        case model_family::cnn: return cnn_params{};
        case model_family::transformer: return transformer_params{};
    }
    return cnn_params{};
}

model_spec model_spec::defaults(model_family family, feature_kind features, std::size_t input_dim, std::uint64_t seed) {
    return { family, features, input_dim, default_hyperparams(family), seed };
}

const optimizer_params *model_spec::optimizer() const noexcept {
    return std::visit([](const auto &p) -> const optimizer_params * {
        if constexpr (requires { p.optimizer; }) {
            return &p.optimizer;
        } else {
            return nullptr;
        }
    }, params);
}

optimizer_params *model_spec::optimizer() noexcept {
    return const_cast<optimizer_params *>(std::as_const(*this).optimizer());
}

}  // namespace neuro::classifiers
