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

#ifndef NEURO_CLASSIFIERS_ESTIMATOR_HPP_
#define NEURO_CLASSIFIERS_ESTIMATOR_HPP_

#include "neuro/byte_io.hpp"
#include "neuro/classifiers/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace neuro::classifiers {

/// Fitted model body. Inputs are already standardized.
class estimator {
  public:
    virtual ~estimator() = default;

    /// P(label = PT) in [0, 1].
    [[nodiscard]] virtual double predict_proba(std::span<const double> standardized) const = 0;
    /// Number of trainable scalars (0 for non-parametric families).
    [[nodiscard]] virtual std::size_t parameter_count() const noexcept = 0;
    virtual void save(byte_writer &out) const = 0;
};

/// Hard labels as 0/1 doubles, the form every trainer consumes.
[[nodiscard]] std::vector<double> encode_labels(std::span<const label> labels);

}  // namespace neuro::classifiers

#endif  // NEURO_CLASSIFIERS_ESTIMATOR_HPP_
