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

#include "neuro/classifiers/svm.hpp"

#include "neuro/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

namespace neuro::classifiers {

namespace {

constexpr double tau = 1e-12;
constexpr std::size_t max_smo_iterations = 10'000'000;

double rbf(std::span<const double> a, std::span<const double> b, double gamma) noexcept {
    double sq = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        sq += d * d;
    }
    return std::exp(-gamma * sq);
}

double sigmoid_predict(double decision, double a, double b) noexcept {
    const double f = decision * a + b;
    return f >= 0 ? std::exp(-f) / (1.0 + std::exp(-f)) : 1.0 / (1.0 + std::exp(f));
}

// Dual solution of one binary C-SVC problem.
struct smo_result {
    std::vector<double> alpha;
    double rho{ 0.0 };
};

smo_result solve_smo(const std::vector<double> &kernel, std::span<const double> y, double c, double eps) {
    const std::size_t l = y.size();
    const auto k_at = [&](std::size_t i, std::size_t j) { return kernel[i * l + j]; };
    std::vector<double> alpha(l, 0.0);
    std::vector<double> grad(l, -1.0);
    const auto upper = [&](std::size_t t) { return alpha[t] >= c; };
    const auto lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

    for (std::size_t iter = 0; iter < max_smo_iterations; ++iter) {
        double gmax = -std::numeric_limits<double>::infinity();
        double gmax2 = -std::numeric_limits<double>::infinity();
        std::ptrdiff_t gmax_idx = -1;
        std::ptrdiff_t gmin_idx = -1;
        double obj_diff_min = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < l; ++t) {
            if (y[t] > 0) {
                if (!upper(t) && -grad[t] >= gmax) {
                    gmax = -grad[t];
                    gmax_idx = static_cast<std::ptrdiff_t>(t);
                }
            } else if (!lower(t) && grad[t] >= gmax) {
                gmax = grad[t];
                gmax_idx = static_cast<std::ptrdiff_t>(t);
            }
        }
        if (gmax_idx < 0) {
            break;
        }
        const auto i = static_cast<std::size_t>(gmax_idx);
        for (std::size_t j = 0; j < l; ++j) {
            if (y[j] > 0) {
                if (!lower(j)) {
                    const double grad_diff = gmax + grad[j];
                    gmax2 = std::max(gmax2, grad[j]);
                    if (grad_diff > 0) {
                        const double quad = k_at(i, i) + k_at(j, j) - 2.0 * y[i] * y[i] * y[j] * k_at(i, j);
                        const double obj = -(grad_diff * grad_diff) / (quad > 0 ? quad : tau);
                        if (obj <= obj_diff_min) {
                            gmin_idx = static_cast<std::ptrdiff_t>(j);
                            obj_diff_min = obj;
                        }
                    }
                }
            } else if (!upper(j)) {
                const double grad_diff = gmax - grad[j];
                gmax2 = std::max(gmax2, -grad[j]);
                if (grad_diff > 0) {
                    const double quad = k_at(i, i) + k_at(j, j) + 2.0 * y[i] * y[i] * y[j] * k_at(i, j);
                    const double obj = -(grad_diff * grad_diff) / (quad > 0 ? quad : tau);
                    if (obj <= obj_diff_min) {
                        gmin_idx = static_cast<std::ptrdiff_t>(j);
                        obj_diff_min = obj;
                    }
                }
            }
        }
        if (gmax + gmax2 < eps || gmin_idx < 0) {
            break;
        }
        const auto j = static_cast<std::size_t>(gmin_idx);
        const double q_ij = y[i] * y[j] * k_at(i, j);
        const double old_ai = alpha[i];
        const double old_aj = alpha[j];
        if (y[i] != y[j]) {
            double quad = k_at(i, i) + k_at(j, j) + 2.0 * q_ij;
            quad = quad > 0 ? quad : tau;
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0) {
                if (alpha[j] < 0) {
                    alpha[j] = 0;
                    alpha[i] = diff;
                }
            } else if (alpha[i] < 0) {
                alpha[i] = 0;
                alpha[j] = -diff;
            }
            if (diff > 0) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if (alpha[j] > c) {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            double quad = k_at(i, i) + k_at(j, j) - 2.0 * q_ij;
            quad = quad > 0 ? quad : tau;
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > c) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if (alpha[j] < 0) {
                alpha[j] = 0;
                alpha[i] = sum;
            }
            if (sum > c) {
                if (alpha[j] > c) {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if (alpha[i] < 0) {
                alpha[i] = 0;
                alpha[j] = sum;
            }
        }
        const double d_ai = alpha[i] - old_ai;
        const double d_aj = alpha[j] - old_aj;
        for (std::size_t k = 0; k < l; ++k) {
            grad[k] += y[k] * (y[i] * k_at(i, k) * d_ai + y[j] * k_at(j, k) * d_aj);
        }
    }

    // Offset from free support vectors, or the midpoint of the feasible range.
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double sum_free = 0.0;
    std::size_t n_free = 0;
    for (std::size_t t = 0; t < l; ++t) {
        const double yg = y[t] * grad[t];
        if (upper(t)) {
            if (y[t] < 0) {
                ub = std::min(ub, yg);
            } else {
                lb = std::max(lb, yg);
            }
        } else if (lower(t)) {
            if (y[t] > 0) {
                ub = std::min(ub, yg);
            } else {
                lb = std::max(lb, yg);
            }
        } else {
            ++n_free;
            sum_free += yg;
        }
    }
    smo_result r;
    r.alpha = std::move(alpha);
    r.rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;
    return r;
}

// Trains a bare RBF machine (no Platt step) on the listed rows.
struct bare_svm {
    std::vector<std::size_t> rows;
    std::vector<double> coef;
    double rho{ 0.0 };
};

bare_svm fit_bare(const feature_matrix &x, std::span<const double> sign, std::span<const std::size_t> rows, double gamma, const svm_params &params) {
    const std::size_t l = rows.size();
    std::vector<double> kernel(l * l);
    for (std::size_t a = 0; a < l; ++a) {
        kernel[a * l + a] = 1.0;
        for (std::size_t b = a + 1; b < l; ++b) {
            const double k = rbf(x.row(rows[a]), x.row(rows[b]), gamma);
            kernel[a * l + b] = k;
            kernel[b * l + a] = k;
        }
    }
    std::vector<double> y(l);
    for (std::size_t a = 0; a < l; ++a) {
        y[a] = sign[rows[a]];
    }
    const smo_result sol = solve_smo(kernel, y, params.c, params.tolerance);
    bare_svm m;
    m.rho = sol.rho;
    for (std::size_t a = 0; a < l; ++a) {
        if (sol.alpha[a] > 0.0) {
            m.rows.push_back(rows[a]);
            m.coef.push_back(sol.alpha[a] * y[a]);
        }
    }
    return m;
}

double bare_decision(const bare_svm &m, const feature_matrix &x, std::span<const double> probe, double gamma) {
    double f = -m.rho;
    for (std::size_t s = 0; s < m.rows.size(); ++s) {
        f += m.coef[s] * rbf(x.row(m.rows[s]), probe, gamma);
    }
    return f;
}

}  // namespace

std::pair<double, double> fit_platt_sigmoid(std::span<const double> dec, std::span<const double> targets) {
    const std::size_t l = dec.size();
    double prior1 = 0.0;
    double prior0 = 0.0;
    for (const double t : targets) {
        (t > 0.5 ? prior1 : prior0) += 1.0;
    }
    constexpr int max_iter = 100;
    constexpr double min_step = 1e-10;
    constexpr double sigma = 1e-12;
    constexpr double eps = 1e-5;
    const double hi_target = (prior1 + 1.0) / (prior1 + 2.0);
    const double lo_target = 1.0 / (prior0 + 2.0);
    std::vector<double> t(l);
    double a = 0.0;
    double b = std::log((prior0 + 1.0) / (prior1 + 1.0));

    const auto objective = [&](double aa, double bb) {
        double f = 0.0;
        for (std::size_t i = 0; i < l; ++i) {
            const double fapb = dec[i] * aa + bb;
            f += fapb >= 0 ? t[i] * fapb + std::log1p(std::exp(-fapb)) : (t[i] - 1.0) * fapb + std::log1p(std::exp(fapb));
        }
        return f;
    };
    for (std::size_t i = 0; i < l; ++i) {
        t[i] = targets[i] > 0.5 ? hi_target : lo_target;
    }
    double fval = objective(a, b);
    for (int iter = 0; iter < max_iter; ++iter) {
        double h11 = sigma;
        double h22 = sigma;
        double h21 = 0.0;
        double g1 = 0.0;
        double g2 = 0.0;
        for (std::size_t i = 0; i < l; ++i) {
            const double fapb = dec[i] * a + b;
            double p = 0.0;
            double q = 0.0;
            if (fapb >= 0) {
                p = std::exp(-fapb) / (1.0 + std::exp(-fapb));
                q = 1.0 / (1.0 + std::exp(-fapb));
            } else {
                p = 1.0 / (1.0 + std::exp(fapb));
                q = std::exp(fapb) / (1.0 + std::exp(fapb));
            }
            const double d2 = p * q;
            h11 += dec[i] * dec[i] * d2;
            h22 += d2;
            h21 += dec[i] * d2;
            const double d1 = t[i] - p;
            g1 += dec[i] * d1;
            g2 += d1;
        }
        if (std::abs(g1) < eps && std::abs(g2) < eps) {
            break;
        }
        const double det = h11 * h22 - h21 * h21;
        const double da = -(h22 * g1 - h21 * g2) / det;
        const double db = -(-h21 * g1 + h11 * g2) / det;
        const double gd = g1 * da + g2 * db;
        double step = 1.0;
        while (step >= min_step) {
            const double na = a + step * da;
            const double nb = b + step * db;
            const double nf = objective(na, nb);
            if (nf < fval + 0.0001 * step * gd) {
                a = na;
                b = nb;
                fval = nf;
                break;
            }
            step /= 2.0;
        }
        if (step < min_step) {
            break;
        }
    }
    return { a, b };
}

svm_estimator svm_estimator::fit(const feature_matrix &x, std::span<const double> targets, const svm_params &params, std::uint64_t seed) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();

    double sum = 0.0;
    for (const double v : x.data()) {
        sum += v;
    }
    const double mean = sum / static_cast<double>(x.data().size());
    double var = 0.0;
    for (const double v : x.data()) {
        var += (v - mean) * (v - mean);
    }
    var /= static_cast<double>(x.data().size());

    svm_estimator model;
    model.dim_ = d;
    model.gamma_ = var > 0.0 ? 1.0 / (static_cast<double>(d) * var) : 1.0;

    std::vector<double> sign(n);
    for (std::size_t i = 0; i < n; ++i) {
        sign[i] = targets[i] > 0.5 ? 1.0 : -1.0;
    }
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);

    // Decision values for Platt scaling come from held-out internal folds.
    std::vector<double> held_out(n, 0.0);
    std::vector<std::size_t> perm = all;
    rng gen{ hash_combine(seed, 0x5E1F0DULL) };
    gen.shuffle(std::span{ perm });
    const std::size_t folds = std::max<std::size_t>(2, std::min(params.platt_folds, n));
    for (std::size_t f = 0; f < folds; ++f) {
        const std::size_t begin = f * n / folds;
        const std::size_t end = (f + 1) * n / folds;
        std::vector<std::size_t> train_rows;
        std::size_t pos = 0;
        std::size_t neg = 0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k < begin || k >= end) {
                train_rows.push_back(perm[k]);
                (sign[perm[k]] > 0 ? pos : neg) += 1;
            }
        }
        for (std::size_t k = begin; k < end; ++k) {
            double dv = 0.0;
            if (pos > 0 && neg == 0) {
                dv = 1.0;
            } else if (pos == 0 && neg > 0) {
                dv = -1.0;
            } else if (pos > 0 && neg > 0) {
                const bare_svm inner = fit_bare(x, sign, train_rows, model.gamma_, params);
                dv = bare_decision(inner, x, x.row(perm[k]), model.gamma_);
            }
            held_out[perm[k]] = dv;
        }
    }
    std::tie(model.platt_a_, model.platt_b_) = fit_platt_sigmoid(held_out, targets);

    const bare_svm full = fit_bare(x, sign, all, model.gamma_, params);
    model.rho_ = full.rho;
    model.coef_ = full.coef;
    model.support_.reserve(full.rows.size() * d);
    for (const std::size_t r : full.rows) {
        const auto row = x.row(r);
        model.support_.insert(model.support_.end(), row.begin(), row.end());
    }
    return model;
}

double svm_estimator::decision_value(std::span<const double> x) const {
    double f = -rho_;
    for (std::size_t s = 0; s < coef_.size(); ++s) {
        f += coef_[s] * rbf(std::span{ support_ }.subspan(s * dim_, dim_), x, gamma_);
    }
    return f;
}

double svm_estimator::predict_proba(std::span<const double> x) const {
    return std::clamp(sigmoid_predict(decision_value(x), platt_a_, platt_b_), 0.0, 1.0);
}

void svm_estimator::save(byte_writer &out) const {
    out.put_u64(dim_);
    out.put_f64(gamma_);
    out.put_f64(rho_);
    out.put_f64(platt_a_);
    out.put_f64(platt_b_);
    out.put_f64_array(coef_);
    out.put_f64_array(support_);
}

svm_estimator svm_estimator::load(byte_reader &in) {
    svm_estimator m;
    m.dim_ = static_cast<std::size_t>(in.u64());
    m.gamma_ = in.f64();
    m.rho_ = in.f64();
    m.platt_a_ = in.f64();
    m.platt_b_ = in.f64();
    m.coef_ = in.f64_array();
    m.support_ = in.f64_array();
    if (m.support_.size() != m.coef_.size() * m.dim_) {
        throw error{ error_code::corrupt_artifact, "SVM payload has inconsistent support vector sizes" };
    }
    return m;
}

}  // namespace neuro::classifiers
