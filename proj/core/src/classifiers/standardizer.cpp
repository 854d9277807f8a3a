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

#include "neuro/classifiers/standardizer.hpp"

#include <cmath>

namespace neuro::classifiers {

standardizer standardizer::fit(const feature_matrix &features) {
    const std::size_t n = features.rows();
    const std::size_t d = features.cols();
    standardizer s;
    s.mean.assign(d, 0.0);
    s.stddev.assign(d, 1.0);
    if (n == 0) {
        return s;
    }
    for (std::size_t j = 0; j < d; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sum += features(i, j);
        }
        const double mu = sum / static_cast<double>(n);
        double sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double diff = features(i, j) - mu;
            sq += diff * diff;
        }
        const double sd = std::sqrt(sq / static_cast<double>(n));
        s.mean[j] = mu;
        s.stddev[j] = sd > 1e-12 ? sd : 1.0;
    }
    return s;
}

std::vector<double> standardizer::apply(std::span<const double> x) const {
    std::vector<double> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        out[j] = (x[j] - mean[j]) / stddev[j];
    }
    return out;
}

feature_matrix standardizer::apply(const feature_matrix &features) const {
    feature_matrix out{ features.rows(), features.cols() };
    for (std::size_t i = 0; i < features.rows(); ++i) {
        const auto src = features.row(i);
        auto dst = out.row(i);
        for (std::size_t j = 0; j < src.size(); ++j) {
            dst[j] = (src[j] - mean[j]) / stddev[j];
        }
    }
    return out;
}

}  // namespace neuro::classifiers
