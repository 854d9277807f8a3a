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

#ifndef NEURO_CLASSIFIERS_MODEL_HPP_
#define NEURO_CLASSIFIERS_MODEL_HPP_

#include "neuro/classifiers/estimator.hpp"
#include "neuro/classifiers/standardizer.hpp"
#include "neuro/classifiers/types.hpp"
#include "neuro/linguistic.hpp"
#include "neuro/paralinguistic.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace neuro::classifiers {

struct train_metadata {
    std::size_t epochs_run{ 0 };
    std::size_t training_rows{ 0 };
    /// Per-epoch mean loss; empty for SVM and RF.
    std::vector<double> epoch_loss;
    standardizer scaler;

    [[nodiscard]] std::optional<double> final_loss() const {
        return epoch_loss.empty() ? std::nullopt : std::optional{ epoch_loss.back() };
    }

    friend bool operator==(const train_metadata &, const train_metadata &) = default;
};

/// Cross-validated scores attached to a stored model.
struct cv_scores {
    std::size_t k{ 0 };
    std::uint64_t seed{ 0 };
    std::vector<double> fold_accuracy;
    std::vector<double> fold_macro_f1;
    double mean_accuracy{ 0.0 };
    double mean_macro_f1{ 0.0 };

    friend bool operator==(const cv_scores &, const cv_scores &) = default;
};

/// Immutable after training; safe to share across threads for prediction.
struct trained_model {
    model_spec spec;
    train_metadata metadata;
    std::shared_ptr<const estimator> body;
    std::optional<cv_scores> evaluation;
    /// UTC, ISO 8601 with milliseconds.
    std::string created_at;
};

[[nodiscard]] std::vector<double> fuse_features(const linguistic::linguistic_features &ling,
                                                const paralinguistic::paralinguistic_embedding &para);

/// Throws degenerate_labels, non_finite_input, dimension_mismatch.
[[nodiscard]] trained_model train(const model_spec &spec, const feature_matrix &features, std::span<const label> labels);

[[nodiscard]] double predict_proba(const trained_model &model, std::span<const double> x);
[[nodiscard]] label classify(const trained_model &model, std::span<const double> x);

/// The decision rule shared by every caller: PT iff p >= 0.5.
[[nodiscard]] constexpr label threshold(double probability) noexcept {
    return probability >= 0.5 ? label::pt : label::hc;
}

[[nodiscard]] std::string utc_timestamp_now();

}  // namespace neuro::classifiers

#endif  // NEURO_CLASSIFIERS_MODEL_HPP_
