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

#ifndef NEURO_EVALUATION_HPP_
#define NEURO_EVALUATION_HPP_

#include "neuro/classifiers/model.hpp"
#include "neuro/classifiers/types.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace neuro::evaluation {

using classifiers::label;

struct fold_assignment {
    std::size_t k{ 5 };
    std::uint64_t seed{ 0 };
    /// Fold index of each row.
    std::vector<std::size_t> fold_of;

    [[nodiscard]] std::vector<std::size_t> test_rows(std::size_t fold) const;
    [[nodiscard]] std::vector<std::size_t> train_rows(std::size_t fold) const;
};

/**
 * Each class is shuffled on its own and dealt round-robin into the folds.
 * The dealing position carries over from one class to the next, so the
 * larger folds of one class do not line up with those of the other.
 * Throws too_few_samples when a class has fewer than k members.
 */
[[nodiscard]] fold_assignment stratified_kfold(std::span<const label> labels, std::size_t k = 5, std::uint64_t seed = 0);

/// Throws length_mismatch or empty_input.
[[nodiscard]] double accuracy(std::span<const label> y_true, std::span<const label> y_pred);
/// Unweighted mean of the PT and HC F1 scores. A class that is neither
/// present nor predicted scores 0.
[[nodiscard]] double macro_f1(std::span<const label> y_true, std::span<const label> y_pred);

/// Read access to the dataset under evaluation.
class row_source {
  public:
    virtual ~row_source() = default;
    [[nodiscard]] virtual std::size_t rows() const = 0;
    [[nodiscard]] virtual std::size_t cols() const = 0;
    [[nodiscard]] virtual std::span<const double> row(std::size_t i) const = 0;
    [[nodiscard]] virtual label label_of(std::size_t i) const = 0;
};

class matrix_source final : public row_source {
  public:
    matrix_source(const classifiers::feature_matrix &features, std::span<const label> labels);

    [[nodiscard]] std::size_t rows() const override { return features_.rows(); }
    [[nodiscard]] std::size_t cols() const override { return features_.cols(); }
    [[nodiscard]] std::span<const double> row(std::size_t i) const override { return features_.row(i); }
    [[nodiscard]] label label_of(std::size_t i) const override { return labels_[i]; }

  private:
    const classifiers::feature_matrix &features_;
    std::span<const label> labels_;
};

/// Hooks around each fold's fit. Every row read between the two calls
/// belongs to that fold's training set.
class cv_observer {
  public:
    virtual ~cv_observer() = default;
    virtual void on_fit_begin(std::size_t /*fold*/, std::span<const std::size_t> /*train_rows*/) {}
    virtual void on_fit_end(std::size_t /*fold*/) {}
};

using predictor = std::function<label(std::span<const double>)>;
using trainer = std::function<predictor(const classifiers::model_spec &, const classifiers::feature_matrix &, std::span<const label>)>;

/// Trains with classifiers::train and thresholds its probabilities.
[[nodiscard]] trainer default_trainer();

struct cv_options {
    trainer fit = default_trainer();
    cv_observer *observer{ nullptr };
    /// Train folds on separate threads. Observers then see interleaved calls.
    bool parallel_folds{ false };
};

struct report_row {
    classifiers::model_family family{ classifiers::model_family::svm };
    classifiers::feature_kind features{ classifiers::feature_kind::linguistic };
    std::vector<double> fold_accuracy;
    std::vector<double> fold_macro_f1;
    double mean_accuracy{ 0.0 };
    double mean_macro_f1{ 0.0 };

    [[nodiscard]] classifiers::cv_scores scores(std::size_t k, std::uint64_t seed) const;

    friend bool operator==(const report_row &, const report_row &) = default;
};

struct eval_report {
    std::size_t k{ 5 };
    std::uint64_t seed{ 0 };
    std::vector<report_row> rows;

    friend bool operator==(const eval_report &, const eval_report &) = default;
};

/// Errors from a fold are rethrown with the same code and the fold index
/// prefixed to the message.
[[nodiscard]] report_row evaluate_cv(const row_source &data, const classifiers::model_spec &spec, const fold_assignment &folds,
                                     const cv_options &options = {});

[[nodiscard]] std::string section_title(classifiers::feature_kind kind);
/// "98.13 / 97.37"
[[nodiscard]] std::string format_scores(double accuracy, double macro_f1);
[[nodiscard]] std::string render_table(const eval_report &report);
[[nodiscard]] std::string to_json(const eval_report &report, int indent = 2);
[[nodiscard]] eval_report parse_report(std::string_view json_text);

}  // namespace neuro::evaluation

#endif  // NEURO_EVALUATION_HPP_
