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

#ifndef NEURO_CLASSIFIERS_TYPES_HPP_
#define NEURO_CLASSIFIERS_TYPES_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace neuro::classifiers {

enum class model_family {
    svm,
    rf,
    rnn,
    cnn,
    transformer,
};

enum class feature_kind {
    linguistic,
    paralinguistic,
    fused,
};

/// Screening outcome. The numeric encoding (PT = 1, HC = 0) is fixed.
enum class label : std::uint8_t {
    hc = 0,
    pt = 1,
};

[[nodiscard]] std::string_view to_string(model_family family) noexcept;
[[nodiscard]] std::string_view to_string(feature_kind kind) noexcept;
[[nodiscard]] std::string_view to_string(label l) noexcept;

/// Case-insensitive; throws error_code::invalid_argument on unknown names.
[[nodiscard]] model_family parse_family(std::string_view name);
[[nodiscard]] feature_kind parse_feature_kind(std::string_view name);
[[nodiscard]] label parse_label(std::string_view name);

[[nodiscard]] constexpr double encode(label l) noexcept { return l == label::pt ? 1.0 : 0.0; }

inline constexpr std::array<model_family, 5> all_families = {
    model_family::svm, model_family::rf, model_family::rnn, model_family::cnn, model_family::transformer,
};
inline constexpr std::array<feature_kind, 3> all_feature_kinds = {
    feature_kind::linguistic, feature_kind::paralinguistic, feature_kind::fused,
};

[[nodiscard]] constexpr bool is_neural(model_family f) noexcept {
    return f == model_family::rnn || f == model_family::cnn || f == model_family::transformer;
}

/// Dense row-major N x D matrix of features.
class feature_matrix {
  public:
    feature_matrix() = default;
    feature_matrix(std::size_t rows, std::size_t cols) :
        rows_{ rows },
        cols_{ cols },
        data_(rows * cols, 0.0) {}

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    [[nodiscard]] std::span<double> row(std::size_t i) { return std::span{ data_ }.subspan(i * cols_, cols_); }
    [[nodiscard]] std::span<const double> row(std::size_t i) const { return std::span{ data_ }.subspan(i * cols_, cols_); }
    [[nodiscard]] double &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    /// Appends a row; the first row fixes the column count.
    void push_row(std::span<const double> values);

    [[nodiscard]] const std::vector<double> &data() const noexcept { return data_; }

  private:
    std::size_t rows_{ 0 };
    std::size_t cols_{ 0 };
    std::vector<double> data_;
};

struct optimizer_params {
    std::size_t epochs{ 50 };
    std::size_t batch_size{ 16 };
    double learning_rate{ 1e-3 };
};

struct svm_params {
    double c{ 1.0 };
    double tolerance{ 1e-3 };
    /// Internal folds used to produce decision values for Platt scaling.
    std::size_t platt_folds{ 5 };
};

struct rf_params {
    std::size_t trees{ 100 };
    /// 0 means unlimited.
    std::size_t max_depth{ 0 };
    std::size_t min_samples_split{ 2 };
};

struct rnn_params {
    std::size_t hidden_units{ 50 };
    optimizer_params optimizer;
};

struct cnn_params {
    std::size_t filters{ 64 };
    std::size_t kernel_width{ 3 };
    std::size_t dense_units{ 128 };
    optimizer_params optimizer;
};

struct transformer_params {
    std::size_t heads{ 4 };
    std::size_t model_width{ 32 };
    std::size_t feed_forward_units{ 128 };
    optimizer_params optimizer;
};

using hyperparams = std::variant<svm_params, rf_params, rnn_params, cnn_params, transformer_params>;

[[nodiscard]] hyperparams default_hyperparams(model_family family);

struct model_spec {
    model_family family{ model_family::cnn };
    feature_kind features{ feature_kind::paralinguistic };
    std::size_t input_dim{ 0 };
    hyperparams params{ cnn_params{} };
    std::uint64_t seed{ 0 };

    /// Spec with the family's default hyperparameters.
    [[nodiscard]] static model_spec defaults(model_family family, feature_kind features, std::size_t input_dim, std::uint64_t seed = 0);

    /// Optimizer settings of a neural family; nullptr otherwise.
    [[nodiscard]] const optimizer_params *optimizer() const noexcept;
    [[nodiscard]] optimizer_params *optimizer() noexcept;
};

}  // namespace neuro::classifiers

#endif  // NEURO_CLASSIFIERS_TYPES_HPP_
