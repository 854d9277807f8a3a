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

#include "neuro/classifiers/random_forest.hpp"

#include "neuro/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace neuro::classifiers {

namespace {

struct split {
    bool found{ false };
    std::size_t feature{ 0 };
    double threshold{ 0.0 };
    double impurity{ 0.0 };
};

double gini(double pos, double total) noexcept {
    if (total <= 0.0) {
        return 0.0;
    }
    const double p = pos / total;
    return 2.0 * p * (1.0 - p);
}

class tree_builder {
  public:
    tree_builder(const feature_matrix &x, std::span<const double> targets, const rf_params &params, rng &gen) :
        x_{ x },
        targets_{ targets },
        params_{ params },
        gen_{ gen },
        features_per_split_{ std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(x.cols())))) } {}

    decision_tree build(std::vector<std::size_t> sample) {
        decision_tree tree;
        tree.nodes.emplace_back();
        struct pending {
            std::uint32_t node;
            std::vector<std::size_t> rows;
            std::size_t depth;
        };
        std::vector<pending> stack;
        stack.push_back({ 0, std::move(sample), 0 });
        while (!stack.empty()) {
            pending job = std::move(stack.back());
            stack.pop_back();
            const std::size_t n = job.rows.size();
            std::size_t pos = 0;
            for (const std::size_t r : job.rows) {
                pos += targets_[r] > 0.5 ? 1 : 0;
            }
            // Majority vote; ties go to PT.
            tree.nodes[job.node].vote = 2 * pos >= n ? 1 : 0;
            const bool pure = pos == 0 || pos == n;
            const bool depth_capped = params_.max_depth != 0 && job.depth >= params_.max_depth;
            if (pure || n < params_.min_samples_split || depth_capped) {
                continue;
            }
            const split best = find_split(job.rows);
            if (!best.found) {
                continue;
            }
            std::vector<std::size_t> left;
            std::vector<std::size_t> right;
            for (const std::size_t r : job.rows) {
                (x_(r, best.feature) <= best.threshold ? left : right).push_back(r);
            }
            const auto left_id = static_cast<std::uint32_t>(tree.nodes.size());
            tree.nodes.emplace_back();
            const auto right_id = static_cast<std::uint32_t>(tree.nodes.size());
            tree.nodes.emplace_back();
            decision_tree::node &parent = tree.nodes[job.node];
            parent.feature = static_cast<std::int32_t>(best.feature);
            parent.threshold = best.threshold;
            parent.left = left_id;
            parent.right = right_id;
            stack.push_back({ right_id, std::move(right), job.depth + 1 });
            stack.push_back({ left_id, std::move(left), job.depth + 1 });
        }
        return tree;
    }

  private:
    split find_split(const std::vector<std::size_t> &rows) {
        std::vector<std::size_t> order(x_.cols());
        std::iota(order.begin(), order.end(), 0);
        gen_.shuffle(std::span{ order });

        split best;
        std::size_t informative = 0;
        std::vector<std::pair<double, double>> values(rows.size());
        double total_pos = 0.0;
        for (const std::size_t r : rows) {
            total_pos += targets_[r];
        }
        const auto n = static_cast<double>(rows.size());
        for (const std::size_t f : order) {
            if (informative >= features_per_split_ && best.found) {
                break;
            }
            for (std::size_t k = 0; k < rows.size(); ++k) {
                values[k] = { x_(rows[k], f), targets_[rows[k]] };
            }
            std::sort(values.begin(), values.end());
            if (values.front().first == values.back().first) {
                continue;  // constant in this node
            }
            ++informative;
            double left_pos = 0.0;
            for (std::size_t k = 0; k + 1 < values.size(); ++k) {
                left_pos += values[k].second;
                if (values[k].first == values[k + 1].first) {
                    continue;
                }
                const auto nl = static_cast<double>(k + 1);
                const double nr = n - nl;
                const double impurity = (nl * gini(left_pos, nl) + nr * gini(total_pos - left_pos, nr)) / n;
                if (!best.found || impurity < best.impurity) {
                    best.found = true;
                    best.feature = f;
                    best.impurity = impurity;
                    double mid = values[k].first + (values[k + 1].first - values[k].first) / 2.0;
                    if (mid >= values[k + 1].first) {
                        mid = values[k].first;
                    }
                    best.threshold = mid;
                }
            }
        }
        return best;
    }

    const feature_matrix &x_;
    std::span<const double> targets_;
    const rf_params &params_;
    rng &gen_;
    std::size_t features_per_split_;
};

}  // namespace

std::uint8_t decision_tree::predict(std::span<const double> x) const {
    std::uint32_t i = 0;
    while (nodes[i].feature >= 0) {
        const node &nd = nodes[i];
        i = x[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
    }
    return nodes[i].vote;
}

std::size_t decision_tree::depth() const {
    std::size_t deepest = 0;
    std::vector<std::pair<std::uint32_t, std::size_t>> stack{ { 0, 0 } };
    while (!stack.empty()) {
        const auto [i, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        if (nodes[i].feature >= 0) {
            stack.emplace_back(nodes[i].left, d + 1);
            stack.emplace_back(nodes[i].right, d + 1);
        }
    }
    return deepest;
}

random_forest_estimator random_forest_estimator::fit(const feature_matrix &x, std::span<const double> targets, const rf_params &params, std::uint64_t seed) {
    random_forest_estimator forest;
    forest.trees_.reserve(params.trees);
    rng gen{ hash_combine(seed, 0xF0'2E57ULL) };
    tree_builder builder{ x, targets, params, gen };
    const std::size_t n = x.rows();
    for (std::size_t t = 0; t < params.trees; ++t) {
        std::vector<std::size_t> sample(n);
        for (std::size_t &s : sample) {
            s = gen.uniform_index(n);
        }
        forest.trees_.push_back(builder.build(std::move(sample)));
    }
    return forest;
}

random_forest_estimator random_forest_estimator::from_trees(std::vector<decision_tree> trees) {
    random_forest_estimator forest;
    forest.trees_ = std::move(trees);
    return forest;
}

double random_forest_estimator::predict_proba(std::span<const double> x) const {
    if (trees_.empty()) {
        return 0.5;
    }
    std::size_t votes = 0;
    for (const decision_tree &t : trees_) {
        votes += t.predict(x);
    }
    return static_cast<double>(votes) / static_cast<double>(trees_.size());
}

void random_forest_estimator::save(byte_writer &out) const {
    out.put_u64(trees_.size());
    for (const decision_tree &t : trees_) {
        out.put_u64(t.nodes.size());
        for (const decision_tree::node &nd : t.nodes) {
            out.put_i32(nd.feature);
            out.put_f64(nd.threshold);
            out.put_u32(nd.left);
            out.put_u32(nd.right);
            out.put_u8(nd.vote);
        }
    }
}

random_forest_estimator random_forest_estimator::load(byte_reader &in) {
    random_forest_estimator forest;
    const std::uint64_t n_trees = in.u64();
    for (std::uint64_t t = 0; t < n_trees; ++t) {
        decision_tree tree;
        const std::uint64_t n_nodes = in.u64();
        if (n_nodes == 0 || n_nodes > in.remaining()) {
            throw error{ error_code::corrupt_artifact, "random forest payload has an invalid node count" };
        }
        tree.nodes.resize(static_cast<std::size_t>(n_nodes));
        for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
            decision_tree::node &nd = tree.nodes[id];
            nd.feature = in.i32();
            nd.threshold = in.f64();
            nd.left = in.u32();
            nd.right = in.u32();
            nd.vote = in.u8();
            // Children always follow their parent, which also rules out cycles.
            if (nd.feature >= 0 && (nd.left >= n_nodes || nd.right >= n_nodes || nd.left <= id || nd.right <= id)) {
                throw error{ error_code::corrupt_artifact, "random forest node points outside its tree" };
            }
        }
        forest.trees_.push_back(std::move(tree));
    }
    return forest;
}

}  // namespace neuro::classifiers
