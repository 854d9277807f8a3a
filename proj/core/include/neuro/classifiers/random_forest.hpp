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

#ifndef NEURO_CLASSIFIERS_RANDOM_FOREST_HPP_
#define NEURO_CLASSIFIERS_RANDOM_FOREST_HPP_

#include "neuro/classifiers/estimator.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace neuro::classifiers {

/// Flattened binary decision tree. Leaves carry a hard vote.
struct decision_tree {
    struct node {
        std::int32_t feature{ -1 };  // -1 marks a leaf
        double threshold{ 0.0 };     // go left when x[feature] <= threshold
        std::uint32_t left{ 0 };
        std::uint32_t right{ 0 };
        std::uint8_t vote{ 0 };      // 1 = PT
    };

    std::vector<node> nodes;

    [[nodiscard]] std::uint8_t predict(std::span<const double> x) const;
    [[nodiscard]] std::size_t depth() const;
};

/**
 * Bagged Gini trees. Each tree sees a bootstrap sample; each split looks
 * at floor(sqrt(input_dim)) randomly chosen non-constant features (more
 * only when none of those admits a split). Trees grow until leaves are
 * pure, unless max_depth is set. The probability is the fraction of trees
 * voting PT.
 */
class random_forest_estimator final : public estimator {
  public:
    [[nodiscard]] static random_forest_estimator fit(const feature_matrix &x, std::span<const double> targets,
                                                     const rf_params &params, std::uint64_t seed);
    [[nodiscard]] static random_forest_estimator load(byte_reader &in);

    /// Builds a forest from explicit trees (tests and tooling).
    [[nodiscard]] static random_forest_estimator from_trees(std::vector<decision_tree> trees);

    [[nodiscard]] double predict_proba(std::span<const double> x) const override;
    [[nodiscard]] std::size_t parameter_count() const noexcept override { return 0; }
    void save(byte_writer &out) const override;

    [[nodiscard]] const std::vector<decision_tree> &trees() const noexcept { return trees_; }

  private:
    std::vector<decision_tree> trees_;
};

}  // namespace neuro::classifiers

#endif  // NEURO_CLASSIFIERS_RANDOM_FOREST_HPP_
