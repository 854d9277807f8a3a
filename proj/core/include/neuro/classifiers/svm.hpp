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

#ifndef NEURO_CLASSIFIERS_SVM_HPP_
#define NEURO_CLASSIFIERS_SVM_HPP_

#include "neuro/classifiers/estimator.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace neuro::classifiers {

/**
 * C-support vector classifier with an RBF kernel, trained by SMO with
 * second-order working set selection. Probabilities come from a Platt
 * sigmoid fit on decision values obtained by internal cross-validation.
 *
 * The kernel coefficient is 1 / (input_dim * variance of all training
 * entries), falling back to 1 when the training matrix is constant.
 */
class svm_estimator final : public estimator {
  public:
    /// `targets` holds 1.0 for PT and 0.0 for HC.
    [[nodiscard]] static svm_estimator fit(const feature_matrix &standardized, std::span<const double> targets,
                                           const svm_params &params, std::uint64_t seed);
    [[nodiscard]] static svm_estimator load(byte_reader &in);

    [[nodiscard]] double predict_proba(std::span<const double> x) const override;
    [[nodiscard]] std::size_t parameter_count() const noexcept override { return 0; }
    void save(byte_writer &out) const override;

    /// Signed distance-like score; positive favours PT.
    [[nodiscard]] double decision_value(std::span<const double> x) const;

    [[nodiscard]] double gamma() const noexcept { return gamma_; }
    [[nodiscard]] std::size_t support_vector_count() const noexcept { return coef_.size(); }
    [[nodiscard]] double platt_a() const noexcept { return platt_a_; }
    [[nodiscard]] double platt_b() const noexcept { return platt_b_; }

  private:
    std::size_t dim_{ 0 };
    double gamma_{ 1.0 };
    double rho_{ 0.0 };
    std::vector<double> support_;  // n_sv x dim_
    std::vector<double> coef_;     // alpha_i * y_i
    double platt_a_{ 0.0 };
    double platt_b_{ 0.0 };
};

/// Fits Platt's sigmoid P(PT | f) = 1 / (1 + exp(A f + B)) by Newton's
/// method with backtracking. Returns {A, B}.
[[nodiscard]] std::pair<double, double> fit_platt_sigmoid(std::span<const double> decision_values, std::span<const double> targets);

}  // namespace neuro::classifiers

#endif  // NEURO_CLASSIFIERS_SVM_HPP_
