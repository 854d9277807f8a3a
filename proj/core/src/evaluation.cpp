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

#include "neuro/evaluation.hpp"

#include "neuro/error.hpp"
#include "neuro/rng.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <exception>
#include <numeric>
#include <thread>

namespace neuro::evaluation {

namespace {

using classifiers::feature_kind;
using classifiers::feature_matrix;
using classifiers::model_spec;

void check_pair(std::span<const label> y_true, std::span<const label> y_pred) {
    if (y_true.size() != y_pred.size()) {
        throw error{ error_code::length_mismatch, fmt::format("{} true labels but {} predictions", y_true.size(), y_pred.size()) };
    }
    if (y_true.empty()) {
        throw error{ error_code::empty_input, "metrics need at least one prediction" };
    }
}

double class_f1(std::span<const label> y_true, std::span<const label> y_pred, label positive) {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const bool actual = y_true[i] == positive;
        const bool predicted = y_pred[i] == positive;
        tp += static_cast<std::size_t>(actual && predicted);
        fp += static_cast<std::size_t>(!actual && predicted);
        fn += static_cast<std::size_t>(actual && !predicted);
    }
    const std::size_t denom = 2 * tp + fp + fn;
    return denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

double mean(const std::vector<double> &v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

struct fold_result {
    double accuracy{ 0.0 };
    double macro_f1{ 0.0 };
};

fold_result run_fold(const row_source &data, const model_spec &spec, const fold_assignment &folds, std::size_t fold, const cv_options &options) {
    const std::vector<std::size_t> train_rows = folds.train_rows(fold);
    const std::vector<std::size_t> test_rows = folds.test_rows(fold);

    if (options.observer != nullptr) {
        options.observer->on_fit_begin(fold, train_rows);
    }
    predictor predict;
    {
        feature_matrix x;
        std::vector<label> y;
        y.reserve(train_rows.size());
        for (const std::size_t r : train_rows) {
            x.push_row(data.row(r));
            y.push_back(data.label_of(r));
        }
        predict = options.fit(spec, x, y);
    }
    if (options.observer != nullptr) {
        options.observer->on_fit_end(fold);
    }

    std::vector<label> truth;
    std::vector<label> predicted;
    for (const std::size_t r : test_rows) {
        truth.push_back(data.label_of(r));
        predicted.push_back(predict(data.row(r)));
    }
    return { accuracy(truth, predicted), macro_f1(truth, predicted) };
}

}  // namespace

std::vector<std::size_t> fold_assignment::test_rows(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i) {
        if (fold_of[i] == fold) {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<std::size_t> fold_assignment::train_rows(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i) {
        if (fold_of[i] != fold) {
            out.push_back(i);
        }
    }
    return out;
}

fold_assignment stratified_kfold(std::span<const label> labels, std::size_t k, std::uint64_t seed) {
    if (k < 2) {
        throw error{ error_code::invalid_argument, fmt::format("k must be at least 2, got {}", k) };
    }
    fold_assignment out;
    out.k = k;
    out.seed = seed;
    out.fold_of.assign(labels.size(), 0);

    rng gen{ hash_combine(seed, 0xF01DULL) };
    std::size_t offset = 0;
    for (const label cls : { label::hc, label::pt }) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == cls) {
                members.push_back(i);
            }
        }
        if (members.size() < k) {
            throw error{ error_code::too_few_samples,
                         fmt::format("class {} has {} samples, {}-fold CV needs at least {}", classifiers::to_string(cls), members.size(), k, k) };
        }
        gen.shuffle(std::span{ members });
        for (std::size_t j = 0; j < members.size(); ++j) {
            out.fold_of[members[j]] = (offset + j) % k;
        }
        offset += members.size();
    }
    return out;
}

double accuracy(std::span<const label> y_true, std::span<const label> y_pred) {
    check_pair(y_true, y_pred);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        hits += static_cast<std::size_t>(y_true[i] == y_pred[i]);
    }
    return static_cast<double>(hits) / static_cast<double>(y_true.size());
}

double macro_f1(std::span<const label> y_true, std::span<const label> y_pred) {
    check_pair(y_true, y_pred);
    return 0.5 * (class_f1(y_true, y_pred, label::pt) + class_f1(y_true, y_pred, label::hc));
}

matrix_source::matrix_source(const classifiers::feature_matrix &features, std::span<const label> labels) :
    features_{ features },
    labels_{ labels } {
    if (features.rows() != labels.size()) {
        throw error{ error_code::length_mismatch, fmt::format("{} feature rows but {} labels", features.rows(), labels.size()) };
    }
}

trainer default_trainer() {
    return [](const model_spec &spec, const feature_matrix &x, std::span<const label> y) -> predictor {
        auto model = std::make_shared<const classifiers::trained_model>(classifiers::train(spec, x, y));
        return [model](std::span<const double> row) { return classifiers::classify(*model, row); };
    };
}

classifiers::cv_scores report_row::scores(std::size_t k, std::uint64_t seed) const {
    return { k, seed, fold_accuracy, fold_macro_f1, mean_accuracy, mean_macro_f1 };
}

report_row evaluate_cv(const row_source &data, const model_spec &spec, const fold_assignment &folds, const cv_options &options) {
    if (folds.fold_of.size() != data.rows()) {
        throw error{ error_code::length_mismatch, fmt::format("fold assignment covers {} rows, dataset has {}", folds.fold_of.size(), data.rows()) };
    }
    std::vector<fold_result> results(folds.k);
    std::vector<std::exception_ptr> failures(folds.k);
    const auto run = [&](std::size_t fold) {
        try {
            results[fold] = run_fold(data, spec, folds, fold, options);
        } catch (...) {
            failures[fold] = std::current_exception();
        }
    };
    if (options.parallel_folds) {
        std::vector<std::jthread> workers;
        for (std::size_t f = 0; f < folds.k; ++f) {
            workers.emplace_back(run, f);
        }
    } else {
        for (std::size_t f = 0; f < folds.k; ++f) {
            run(f);
        }
    }
    for (std::size_t f = 0; f < folds.k; ++f) {
        if (!failures[f]) {
            continue;
        }
        try {
            std::rethrow_exception(failures[f]);
        } catch (const error &e) {
            throw error{ e.code(), fmt::format("fold {}: {}", f, e.what()) };
        }
    }

    report_row row;
    row.family = spec.family;
    row.features = spec.features;
    for (const fold_result &r : results) {
        row.fold_accuracy.push_back(r.accuracy);
        row.fold_macro_f1.push_back(r.macro_f1);
    }
    row.mean_accuracy = mean(row.fold_accuracy);
    row.mean_macro_f1 = mean(row.fold_macro_f1);
    return row;
}

std::string section_title(feature_kind kind) {
    switch (kind) {
        case feature_kind::linguistic: return "Linguistic Representation Modeling";
        case feature_kind::paralinguistic: return "Paralinguistic Representation Modeling";
        case feature_kind::fused: return "Fusion with Linguistic+Paralinguistic";
    }
    return {};
}

std::string format_scores(double accuracy_value, double macro_f1_value) {
    return fmt::format("{:.2f} / {:.2f}", accuracy_value * 100.0, macro_f1_value * 100.0);
}

std::string render_table(const eval_report &report) {
    std::string out = fmt::format("{}-fold cross-validation (seed {})\n{:<14}{}\n", report.k, report.seed, "Model", "Accuracy / F1");
    for (const feature_kind kind : classifiers::all_feature_kinds) {
        out += fmt::format("\n{}\n", section_title(kind));
        for (const report_row &row : report.rows) {
            if (row.features == kind) {
                out += fmt::format("{:<14}{}\n", classifiers::to_string(row.family), format_scores(row.mean_accuracy, row.mean_macro_f1));
            }
        }
    }
    return out;
}

std::string to_json(const eval_report &report, int indent) {
    nlohmann::json rows = nlohmann::json::array();
    for (const report_row &r : report.rows) {
        rows.push_back({
            { "family", classifiers::to_string(r.family) },
            { "feature_kind", classifiers::to_string(r.features) },
            { "fold_accuracy", r.fold_accuracy },
            { "fold_macro_f1", r.fold_macro_f1 },
            { "mean_accuracy", r.mean_accuracy },
            { "mean_macro_f1", r.mean_macro_f1 },
        });
    }
    const nlohmann::json j = { { "k", report.k }, { "seed", report.seed }, { "rows", rows } };
    return j.dump(indent);
}

eval_report parse_report(std::string_view json_text) {
    try {
        const nlohmann::json j = nlohmann::json::parse(json_text);
        eval_report report;
        report.k = j.at("k").get<std::size_t>();
        report.seed = j.at("seed").get<std::uint64_t>();
        for (const auto &r : j.at("rows")) {
            report_row row;
            row.family = classifiers::parse_family(r.at("family").get<std::string>());
            row.features = classifiers::parse_feature_kind(r.at("feature_kind").get<std::string>());
            row.fold_accuracy = r.at("fold_accuracy").get<std::vector<double>>();
            row.fold_macro_f1 = r.at("fold_macro_f1").get<std::vector<double>>();
            row.mean_accuracy = r.at("mean_accuracy").get<double>();
            row.mean_macro_f1 = r.at("mean_macro_f1").get<double>();
            report.rows.push_back(std::move(row));
        }
        return report;
    } catch (const nlohmann::json::exception &e) {
        throw error{ error_code::invalid_argument, fmt::format("report JSON: {}", e.what()) };
    }
}

}  // namespace neuro::evaluation
