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

#ifndef NEURO_CLASSIFIERS_STANDARDIZER_HPP_
#define NEURO_CLASSIFIERS_STANDARDIZER_HPP_

#include "neuro/classifiers/types.hpp"

#include <span>
#include <vector>

namespace neuro::classifiers {

/// Per-feature z-score statistics. Features with zero spread keep a
/// standard deviation of 1 so they map to 0 instead of dividing by zero.
struct standardizer {
    std::vector<double> mean;
    std::vector<double> stddev;

    [[nodiscard]] static standardizer fit(const feature_matrix &features);

    [[nodiscard]] std::vector<double> apply(std::span<const double> x) const;
    [[nodiscard]] feature_matrix apply(const feature_matrix &features) const;

    friend bool operator==(const standardizer &, const standardizer &) = default;
};

}  // namespace neuro::classifiers

#endif  // NEURO_CLASSIFIERS_STANDARDIZER_HPP_
