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

#include "neuro/classifiers/neural.hpp"

#include "neuro/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace neuro::classifiers {

namespace {

using matrix = Eigen::MatrixXd;
using vector = Eigen::VectorXd;
using matrix_map = Eigen::Map<matrix>;
using const_matrix_map = Eigen::Map<const matrix>;
using vector_map = Eigen::Map<vector>;
using const_vector_map = Eigen::Map<const vector>;
using row_vector = Eigen::RowVectorXd;

constexpr double layer_norm_epsilon = 1e-5;

void glorot_uniform(std::span<double> w, std::size_t fan_in, std::size_t fan_out, rng &gen) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double &v : w) {
        v = gen.uniform(-limit, limit);
    }
}

void orthogonal(std::span<double> w, std::size_t n, rng &gen) {
    matrix a(n, n);
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            a(i, j) = gen.normal();
        }
    }
    const Eigen::HouseholderQR<matrix> qr{ a };
    matrix q = qr.householderQ();
    const matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
        if (r(j, j) < 0) {
            q.col(j) *= -1.0;
        }
    }
    std::copy(q.data(), q.data() + q.size(), w.begin());
}

void check_input(std::span<const double> x, std::size_t expected) {
    if (x.size() != expected) {
        throw error{ error_code::dimension_mismatch, "network expects " + std::to_string(expected) + " inputs, got " + std::to_string(x.size()) };
    }
}

// Sequential carve-out of a flat parameter vector.
class layout {
  public:
    std::size_t take(std::size_t n) {
        const std::size_t at = size_;
        size_ += n;
        return at;
    }
    [[nodiscard]] std::size_t size() const noexcept { return size_; }

  private:
    std::size_t size_{ 0 };
};

// ---------------------------------------------------------------- RNN

struct rnn_layout {
    std::size_t wx, wh, b, wo, bo, total;

    explicit rnn_layout(std::size_t h) {
        layout l;
        wx = l.take(h);
        wh = l.take(h * h);
        b = l.take(h);
        wo = l.take(h);
        bo = l.take(1);
        total = l.size();
    }
};

// ---------------------------------------------------------------- CNN

struct cnn_layout {
    std::size_t conv_w, conv_b, dense_w, dense_b, out_w, out_b, total;

    cnn_layout(std::size_t filters, std::size_t kernel, std::size_t dense) {
        layout l;
        conv_w = l.take(filters * kernel);
        conv_b = l.take(filters);
        dense_w = l.take(dense * filters);
        dense_b = l.take(dense);
        out_w = l.take(dense);
        out_b = l.take(1);
        total = l.size();
    }
};

// ---------------------------------------------------------------- Transformer

struct transformer_layout {
    std::size_t w_in, b_in, wq, bq, wk, bk, wv, bv, wo, bo, ln1_g, ln1_b, w1, b1, w2, b2, ln2_g, ln2_b, w_out, b_out, total;

    transformer_layout(std::size_t d, std::size_t ff) {
        layout l;
        w_in = l.take(d);
        b_in = l.take(d);
        wq = l.take(d * d);
        bq = l.take(d);
        wk = l.take(d * d);
        bk = l.take(d);
        wv = l.take(d * d);
        bv = l.take(d);
        wo = l.take(d * d);
        bo = l.take(d);
        ln1_g = l.take(d);
        ln1_b = l.take(d);
        w1 = l.take(d * ff);
        b1 = l.take(ff);
        w2 = l.take(ff * d);
        b2 = l.take(d);
        ln2_g = l.take(d);
        ln2_b = l.take(d);
        w_out = l.take(d);
        b_out = l.take(1);
        total = l.size();
    }
};

struct layer_norm_cache {
    matrix normalized;  // x-hat
    vector inv_std;     // per row
};

matrix layer_norm(const matrix &x, const const_vector_map &gain, const const_vector_map &bias, layer_norm_cache &cache) {
    const Eigen::Index rows = x.rows();
    const auto cols = static_cast<double>(x.cols());
    cache.normalized.resize(x.rows(), x.cols());
    cache.inv_std.resize(rows);
    matrix y(x.rows(), x.cols());
    for (Eigen::Index r = 0; r < rows; ++r) {
        const double mu = x.row(r).sum() / cols;
        const row_vector centered = x.row(r).array() - mu;
        const double var = centered.squaredNorm() / cols;
        const double inv = 1.0 / std::sqrt(var + layer_norm_epsilon);
        cache.inv_std(r) = inv;
        cache.normalized.row(r) = centered * inv;
        y.row(r) = cache.normalized.row(r).cwiseProduct(gain.transpose()) + bias.transpose();
    }
    return y;
}

// Returns d(loss)/d(input); accumulates gain/bias gradients.
matrix layer_norm_backward(const matrix &dy, const layer_norm_cache &cache, const const_vector_map &gain, vector_map grad_gain, vector_map grad_bias) {
    const auto cols = static_cast<double>(dy.cols());
    matrix dx(dy.rows(), dy.cols());
    for (Eigen::Index r = 0; r < dy.rows(); ++r) {
        const row_vector xhat = cache.normalized.row(r);
        grad_gain += dy.row(r).cwiseProduct(xhat).transpose();
        grad_bias += dy.row(r).transpose();
        const row_vector dxhat = dy.row(r).cwiseProduct(gain.transpose());
        const double mean_dxhat = dxhat.sum() / cols;
        const double mean_dxhat_xhat = dxhat.cwiseProduct(xhat).sum() / cols;
        dx.row(r) = cache.inv_std(r) * (dxhat.array() - mean_dxhat - xhat.array() * mean_dxhat_xhat).matrix();
    }
    return dx;
}

matrix sinusoidal_positions(std::size_t length, std::size_t width) {
    matrix pe(static_cast<Eigen::Index>(length), static_cast<Eigen::Index>(width));
    for (std::size_t pos = 0; pos < length; ++pos) {
        for (std::size_t i = 0; i < width; ++i) {
            const double rate = std::pow(10000.0, -static_cast<double>(2 * (i / 2)) / static_cast<double>(width));
            const double angle = static_cast<double>(pos) * rate;
            pe(static_cast<Eigen::Index>(pos), static_cast<Eigen::Index>(i)) = i % 2 == 0 ? std::sin(angle) : std::cos(angle);
        }
    }
    return pe;
}

struct transformer_cache {
    matrix x0, q, k, v, concat;
    std::vector<matrix> attention;  // per head, L x L
    layer_norm_cache ln1, ln2;
    matrix y1, ff_pre, ff_act, y2;
    vector pooled;
};

}  // namespace

double sigmoid(double z) noexcept {
    if (z >= 0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double bce_with_logit(double z, double target) noexcept {
    return std::max(z, 0.0) - z * target + std::log1p(std::exp(-std::abs(z)));
}

// ---------------------------------------------------------------- RNN

rnn_network::rnn_network(std::size_t input_length, const rnn_params &params, rng &init) :
    network{ input_length },
    hidden_{ params.hidden_units } {
    const rnn_layout lay{ hidden_ };
    params_.assign(lay.total, 0.0);
    const std::span<double> p{ params_ };
    glorot_uniform(p.subspan(lay.wx, hidden_), 1, hidden_, init);
    orthogonal(p.subspan(lay.wh, hidden_ * hidden_), hidden_, init);
    glorot_uniform(p.subspan(lay.wo, hidden_), hidden_, 1, init);
}

std::size_t rnn_network::count_parameters(std::size_t hidden_units) noexcept {
    return rnn_layout{ hidden_units }.total;
}

double rnn_network::logit(std::span<const double> x) const {
    check_input(x, input_length_);
    const rnn_layout lay{ hidden_ };
    const auto h = static_cast<Eigen::Index>(hidden_);
    const double *p = params_.data();
    const const_vector_map wx{ p + lay.wx, h };
    const const_matrix_map wh{ p + lay.wh, h, h };
    const const_vector_map b{ p + lay.b, h };
    const const_vector_map wo{ p + lay.wo, h };
    vector state = vector::Zero(h);
    for (const double xt : x) {
        state = (wx * xt + wh * state + b).array().tanh();
    }
    return wo.dot(state) + p[lay.bo];
}

double rnn_network::accumulate_gradient(std::span<const double> x, double target, std::span<double> grad) const {
    check_input(x, input_length_);
    const rnn_layout lay{ hidden_ };
    const auto h = static_cast<Eigen::Index>(hidden_);
    const auto steps = static_cast<Eigen::Index>(x.size());
    const double *p = params_.data();
    const const_vector_map wx{ p + lay.wx, h };
    const const_matrix_map wh{ p + lay.wh, h, h };
    const const_vector_map b{ p + lay.b, h };
    const const_vector_map wo{ p + lay.wo, h };

    matrix states(h, steps + 1);
    states.col(0).setZero();
    for (Eigen::Index t = 0; t < steps; ++t) {
        states.col(t + 1) = (wx * x[static_cast<std::size_t>(t)] + wh * states.col(t) + b).array().tanh();
    }
    const double z = wo.dot(states.col(steps)) + p[lay.bo];
    const double g = sigmoid(z) - target;

    double *gp = grad.data();
    vector_map g_wx{ gp + lay.wx, h };
    matrix_map g_wh{ gp + lay.wh, h, h };
    vector_map g_b{ gp + lay.b, h };
    vector_map g_wo{ gp + lay.wo, h };
    g_wo += g * states.col(steps);
    gp[lay.bo] += g;

    vector dh = g * wo;
    for (Eigen::Index t = steps - 1; t >= 0; --t) {
        const vector dz = dh.array() * (1.0 - states.col(t + 1).array().square());
        g_wx += dz * x[static_cast<std::size_t>(t)];
        g_wh.noalias() += dz * states.col(t).transpose();
        g_b += dz;
        dh.noalias() = wh.transpose() * dz;
    }
    return bce_with_logit(z, target);
}

void rnn_network::save_architecture(byte_writer &out) const {
    out.put_u64(input_length_);
    out.put_u64(hidden_);
}

// ---------------------------------------------------------------- CNN

cnn_network::cnn_network(std::size_t input_length, const cnn_params &params, rng &init) :
    network{ input_length },
    filters_{ params.filters },
    kernel_{ params.kernel_width },
    dense_{ params.dense_units } {
    if (input_length < kernel_) {
        throw error{ error_code::dimension_mismatch, "CNN input length " + std::to_string(input_length) + " is shorter than the kernel width" };
    }
    const cnn_layout lay{ filters_, kernel_, dense_ };
    params_.assign(lay.total, 0.0);
    const std::span<double> p{ params_ };
    glorot_uniform(p.subspan(lay.conv_w, filters_ * kernel_), kernel_, kernel_ * filters_, init);
    glorot_uniform(p.subspan(lay.dense_w, dense_ * filters_), filters_, dense_, init);
    glorot_uniform(p.subspan(lay.out_w, dense_), dense_, 1, init);
}

std::size_t cnn_network::count_parameters(std::size_t filters, std::size_t kernel_width, std::size_t dense_units) noexcept {
    return cnn_layout{ filters, kernel_width, dense_units }.total;
}

namespace {

struct cnn_forward {
    vector pooled;                       // F, after ReLU
    std::vector<Eigen::Index> argmax;    // F
    vector pooled_pre;                   // F, max pre-activation
    vector hidden_pre;                   // U
    vector hidden;                       // U
    double logit{ 0.0 };
};

cnn_forward run_cnn(std::span<const double> x, const double *p, const cnn_layout &lay, std::size_t filters, std::size_t kernel, std::size_t dense) {
    const auto f = static_cast<Eigen::Index>(filters);
    const auto k = static_cast<Eigen::Index>(kernel);
    const auto u = static_cast<Eigen::Index>(dense);
    const auto positions = static_cast<Eigen::Index>(x.size() - kernel + 1);
    const const_matrix_map conv_w{ p + lay.conv_w, f, k };
    const const_vector_map conv_b{ p + lay.conv_b, f };
    const const_matrix_map dense_w{ p + lay.dense_w, u, f };
    const const_vector_map dense_b{ p + lay.dense_b, u };
    const const_vector_map out_w{ p + lay.out_w, u };
    const const_vector_map input{ x.data(), static_cast<Eigen::Index>(x.size()) };

    cnn_forward fw;
    fw.pooled_pre = vector::Constant(f, -std::numeric_limits<double>::infinity());
    fw.argmax.assign(filters, 0);
    for (Eigen::Index pos = 0; pos < positions; ++pos) {
        const vector pre = conv_w * input.segment(pos, k) + conv_b;
        for (Eigen::Index c = 0; c < f; ++c) {
            if (pre(c) > fw.pooled_pre(c)) {
                fw.pooled_pre(c) = pre(c);
                fw.argmax[static_cast<std::size_t>(c)] = pos;
            }
        }
    }
    // max(relu(.)) == relu(max(.))
    fw.pooled = fw.pooled_pre.cwiseMax(0.0);
    fw.hidden_pre = dense_w * fw.pooled + dense_b;
    fw.hidden = fw.hidden_pre.cwiseMax(0.0);
    fw.logit = out_w.dot(fw.hidden) + p[lay.out_b];
    return fw;
}

}  // namespace

double cnn_network::logit(std::span<const double> x) const {
    check_input(x, input_length_);
    return run_cnn(x, params_.data(), cnn_layout{ filters_, kernel_, dense_ }, filters_, kernel_, dense_).logit;
}

double cnn_network::accumulate_gradient(std::span<const double> x, double target, std::span<double> grad) const {
    check_input(x, input_length_);
    const cnn_layout lay{ filters_, kernel_, dense_ };
    const double *p = params_.data();
    const cnn_forward fw = run_cnn(x, p, lay, filters_, kernel_, dense_);
    const double g = sigmoid(fw.logit) - target;

    const auto f = static_cast<Eigen::Index>(filters_);
    const auto k = static_cast<Eigen::Index>(kernel_);
    const auto u = static_cast<Eigen::Index>(dense_);
    const const_matrix_map dense_w{ p + lay.dense_w, u, f };
    const const_vector_map out_w{ p + lay.out_w, u };
    double *gp = grad.data();
    matrix_map g_conv_w{ gp + lay.conv_w, f, k };
    vector_map g_conv_b{ gp + lay.conv_b, f };
    matrix_map g_dense_w{ gp + lay.dense_w, u, f };
    vector_map g_dense_b{ gp + lay.dense_b, u };
    vector_map g_out_w{ gp + lay.out_w, u };

    g_out_w += g * fw.hidden;
    gp[lay.out_b] += g;
    const vector d_hidden = (g * out_w).cwiseProduct((fw.hidden_pre.array() > 0.0).cast<double>().matrix());
    g_dense_w.noalias() += d_hidden * fw.pooled.transpose();
    g_dense_b += d_hidden;
    const vector d_pooled = dense_w.transpose() * d_hidden;
    const const_vector_map input{ x.data(), static_cast<Eigen::Index>(x.size()) };
    for (Eigen::Index c = 0; c < f; ++c) {
        if (fw.pooled_pre(c) <= 0.0) {
            continue;
        }
        const Eigen::Index pos = fw.argmax[static_cast<std::size_t>(c)];
        g_conv_w.row(c) += d_pooled(c) * input.segment(pos, k).transpose();
        g_conv_b(c) += d_pooled(c);
    }
    return bce_with_logit(fw.logit, target);
}

void cnn_network::save_architecture(byte_writer &out) const {
    out.put_u64(input_length_);
    out.put_u64(filters_);
    out.put_u64(kernel_);
    out.put_u64(dense_);
}

// ---------------------------------------------------------------- Transformer

transformer_network::transformer_network(std::size_t input_length, const transformer_params &params, rng &init) :
    network{ input_length },
    heads_{ params.heads },
    width_{ params.model_width },
    ff_{ params.feed_forward_units } {
    if (heads_ == 0 || width_ % heads_ != 0) {
        throw error{ error_code::invalid_argument, "model width must be divisible by the number of heads" };
    }
    const transformer_layout lay{ width_, ff_ };
    params_.assign(lay.total, 0.0);
    const std::span<double> p{ params_ };
    glorot_uniform(p.subspan(lay.w_in, width_), 1, width_, init);
    for (const std::size_t w : { lay.wq, lay.wk, lay.wv, lay.wo }) {
        glorot_uniform(p.subspan(w, width_ * width_), width_, width_, init);
    }
    std::fill_n(p.begin() + static_cast<std::ptrdiff_t>(lay.ln1_g), width_, 1.0);
    std::fill_n(p.begin() + static_cast<std::ptrdiff_t>(lay.ln2_g), width_, 1.0);
    glorot_uniform(p.subspan(lay.w1, width_ * ff_), width_, ff_, init);
    glorot_uniform(p.subspan(lay.w2, ff_ * width_), ff_, width_, init);
    glorot_uniform(p.subspan(lay.w_out, width_), width_, 1, init);
}

std::size_t transformer_network::count_parameters(std::size_t model_width, std::size_t feed_forward_units) noexcept {
    return transformer_layout{ model_width, feed_forward_units }.total;
}

namespace {

double run_transformer(std::span<const double> x, const double *p, std::size_t heads, std::size_t width, std::size_t ff, transformer_cache &c) {
    const transformer_layout lay{ width, ff };
    const auto d = static_cast<Eigen::Index>(width);
    const auto f = static_cast<Eigen::Index>(ff);
    const auto len = static_cast<Eigen::Index>(x.size());
    const auto dh = d / static_cast<Eigen::Index>(heads);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

    const const_vector_map input{ x.data(), len };
    const const_vector_map w_in{ p + lay.w_in, d };
    const const_vector_map b_in{ p + lay.b_in, d };
    const const_matrix_map wq{ p + lay.wq, d, d };
    const const_matrix_map wk{ p + lay.wk, d, d };
    const const_matrix_map wv{ p + lay.wv, d, d };
    const const_matrix_map wo{ p + lay.wo, d, d };
    const const_vector_map bq{ p + lay.bq, d };
    const const_vector_map bk{ p + lay.bk, d };
    const const_vector_map bv{ p + lay.bv, d };
    const const_vector_map bo{ p + lay.bo, d };
    const const_vector_map g1{ p + lay.ln1_g, d };
    const const_vector_map be1{ p + lay.ln1_b, d };
    const const_matrix_map w1{ p + lay.w1, d, f };
    const const_vector_map b1{ p + lay.b1, f };
    const const_matrix_map w2{ p + lay.w2, f, d };
    const const_vector_map b2{ p + lay.b2, d };
    const const_vector_map g2{ p + lay.ln2_g, d };
    const const_vector_map be2{ p + lay.ln2_b, d };
    const const_vector_map w_out{ p + lay.w_out, d };

    c.x0 = (input * w_in.transpose()).rowwise() + b_in.transpose();
    c.x0 += sinusoidal_positions(x.size(), width);
    c.q = (c.x0 * wq).rowwise() + bq.transpose();
    c.k = (c.x0 * wk).rowwise() + bk.transpose();
    c.v = (c.x0 * wv).rowwise() + bv.transpose();
    c.concat.resize(len, d);
    c.attention.resize(heads);
    for (std::size_t h = 0; h < heads; ++h) {
        const Eigen::Index col = static_cast<Eigen::Index>(h) * dh;
        matrix scores = (c.q.middleCols(col, dh) * c.k.middleCols(col, dh).transpose()) * scale;
        for (Eigen::Index r = 0; r < len; ++r) {
            const double m = scores.row(r).maxCoeff();
            scores.row(r) = (scores.row(r).array() - m).exp();
            scores.row(r) /= scores.row(r).sum();
        }
        c.concat.middleCols(col, dh) = scores * c.v.middleCols(col, dh);
        c.attention[h] = std::move(scores);
    }
    const matrix attended = (c.concat * wo).rowwise() + bo.transpose();
    c.y1 = layer_norm(c.x0 + attended, g1, be1, c.ln1);
    c.ff_pre = (c.y1 * w1).rowwise() + b1.transpose();
    c.ff_act = c.ff_pre.cwiseMax(0.0);
    const matrix ff_out = (c.ff_act * w2).rowwise() + b2.transpose();
    c.y2 = layer_norm(c.y1 + ff_out, g2, be2, c.ln2);
    c.pooled = c.y2.colwise().mean().transpose();
    return w_out.dot(c.pooled) + p[lay.b_out];
}

}  // namespace

double transformer_network::logit(std::span<const double> x) const {
    check_input(x, input_length_);
    transformer_cache cache;
    return run_transformer(x, params_.data(), heads_, width_, ff_, cache);
}

double transformer_network::accumulate_gradient(std::span<const double> x, double target, std::span<double> grad) const {
    check_input(x, input_length_);
    transformer_cache c;
    const double *p = params_.data();
    const double z = run_transformer(x, p, heads_, width_, ff_, c);
    const double g = sigmoid(z) - target;

    const transformer_layout lay{ width_, ff_ };
    const auto d = static_cast<Eigen::Index>(width_);
    const auto f = static_cast<Eigen::Index>(ff_);
    const auto len = static_cast<Eigen::Index>(x.size());
    const auto dh = d / static_cast<Eigen::Index>(heads_);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

    const const_vector_map input{ x.data(), len };
    const const_matrix_map wq{ p + lay.wq, d, d };
    const const_matrix_map wk{ p + lay.wk, d, d };
    const const_matrix_map wv{ p + lay.wv, d, d };
    const const_matrix_map wo{ p + lay.wo, d, d };
    const const_vector_map g1{ p + lay.ln1_g, d };
    const const_matrix_map w1{ p + lay.w1, d, f };
    const const_matrix_map w2{ p + lay.w2, f, d };
    const const_vector_map g2{ p + lay.ln2_g, d };
    const const_vector_map w_out{ p + lay.w_out, d };

    double *gp = grad.data();
    vector_map gw_in{ gp + lay.w_in, d };
    vector_map gb_in{ gp + lay.b_in, d };
    matrix_map gwq{ gp + lay.wq, d, d };
    matrix_map gwk{ gp + lay.wk, d, d };
    matrix_map gwv{ gp + lay.wv, d, d };
    matrix_map gwo{ gp + lay.wo, d, d };
    vector_map gbq{ gp + lay.bq, d };
    vector_map gbk{ gp + lay.bk, d };
    vector_map gbv{ gp + lay.bv, d };
    vector_map gbo{ gp + lay.bo, d };
    matrix_map gw1{ gp + lay.w1, d, f };
    vector_map gb1{ gp + lay.b1, f };
    matrix_map gw2{ gp + lay.w2, f, d };
    vector_map gb2{ gp + lay.b2, d };
    vector_map gw_out{ gp + lay.w_out, d };

    gw_out += g * c.pooled;
    gp[lay.b_out] += g;

    // Mean pooling spreads the gradient evenly over positions.
    const matrix d_y2 = (g * w_out.transpose() / static_cast<double>(len)).replicate(len, 1);
    const matrix d_r2 = layer_norm_backward(d_y2, c.ln2, g2, vector_map{ gp + lay.ln2_g, d }, vector_map{ gp + lay.ln2_b, d });

    gw2.noalias() += c.ff_act.transpose() * d_r2;
    gb2 += d_r2.colwise().sum().transpose();
    const matrix d_ff = (d_r2 * w2.transpose()).cwiseProduct((c.ff_pre.array() > 0.0).cast<double>().matrix());
    gw1.noalias() += c.y1.transpose() * d_ff;
    gb1 += d_ff.colwise().sum().transpose();
    const matrix d_y1 = d_r2 + d_ff * w1.transpose();

    const matrix d_r1 = layer_norm_backward(d_y1, c.ln1, g1, vector_map{ gp + lay.ln1_g, d }, vector_map{ gp + lay.ln1_b, d });
    gwo.noalias() += c.concat.transpose() * d_r1;
    gbo += d_r1.colwise().sum().transpose();
    const matrix d_concat = d_r1 * wo.transpose();

    matrix dq(len, d);
    matrix dk(len, d);
    matrix dv(len, d);
    for (std::size_t h = 0; h < heads_; ++h) {
        const Eigen::Index col = static_cast<Eigen::Index>(h) * dh;
        const matrix &a = c.attention[h];
        const auto d_head = d_concat.middleCols(col, dh);
        const matrix d_a = d_head * c.v.middleCols(col, dh).transpose();
        dv.middleCols(col, dh) = a.transpose() * d_head;
        // Softmax Jacobian, row by row.
        const vector row_dot = (d_a.cwiseProduct(a)).rowwise().sum();
        const matrix d_scores = (a.array() * (d_a.colwise() - row_dot).array()).matrix() * scale;
        dq.middleCols(col, dh) = d_scores * c.k.middleCols(col, dh);
        dk.middleCols(col, dh) = d_scores.transpose() * c.q.middleCols(col, dh);
    }
    gwq.noalias() += c.x0.transpose() * dq;
    gwk.noalias() += c.x0.transpose() * dk;
    gwv.noalias() += c.x0.transpose() * dv;
    gbq += dq.colwise().sum().transpose();
    gbk += dk.colwise().sum().transpose();
    gbv += dv.colwise().sum().transpose();

    const matrix d_x0 = d_r1 + dq * wq.transpose() + dk * wk.transpose() + dv * wv.transpose();
    gw_in += d_x0.transpose() * input;
    gb_in += d_x0.colwise().sum().transpose();
    return bce_with_logit(z, target);
}

void transformer_network::save_architecture(byte_writer &out) const {
    out.put_u64(input_length_);
    out.put_u64(heads_);
    out.put_u64(width_);
    out.put_u64(ff_);
}

// ---------------------------------------------------------------- training

adam::adam(std::size_t size, double learning_rate, double beta1, double beta2, double epsilon) :
    lr_{ learning_rate },
    beta1_{ beta1 },
    beta2_{ beta2 },
    eps_{ epsilon },
    m_(size, 0.0),
    v_(size, 0.0) {}

void adam::step(std::span<double> params, std::span<const double> grad) {
    ++t_;
    const double correction1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double correction2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    const double step_size = lr_ * std::sqrt(correction2) / correction1;
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
        v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
        params[i] -= step_size * m_[i] / (std::sqrt(v_[i]) + eps_);
    }
}

training_trace train_network(network &net, const feature_matrix &x, std::span<const double> targets, const optimizer_params &optimizer, std::uint64_t seed) {
    const std::size_t n = x.rows();
    const std::size_t batch = std::max<std::size_t>(1, optimizer.batch_size);
    adam opt{ net.parameter_count(), optimizer.learning_rate };
    rng shuffler{ hash_combine(seed, 0x5B0FF1EULL) };
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> grad(net.parameter_count());

    training_trace trace;
    trace.epoch_loss.reserve(optimizer.epochs);
    for (std::size_t epoch = 0; epoch < optimizer.epochs; ++epoch) {
        shuffler.shuffle(std::span{ order });
        double loss = 0.0;
        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t count = std::min(batch, n - start);
            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t k = 0; k < count; ++k) {
                const std::size_t r = order[start + k];
                loss += net.accumulate_gradient(x.row(r), targets[r], grad);
            }
            const double inv = 1.0 / static_cast<double>(count);
            for (double &gv : grad) {
                gv *= inv;
            }
            opt.step(net.parameters(), grad);
        }
        trace.epoch_loss.push_back(loss / static_cast<double>(n));
        ++trace.epochs_run;
    }
    return trace;
}

std::unique_ptr<network> make_network(const model_spec &spec, rng &init) {
    switch (spec.family) {
        case model_family::rnn: return std::make_unique<rnn_network>(spec.input_dim, std::get<rnn_params>(spec.params), init);
        case model_family::cnn: return std::make_unique<cnn_network>(spec.input_dim, std::get<cnn_params>(spec.params), init);
        case model_family::transformer: return std::make_unique<transformer_network>(spec.input_dim, std::get<transformer_params>(spec.params), init);
        default: throw error{ error_code::invalid_argument, "not a neural family: " + std::string{ to_string(spec.family) } };
    }
}

double neural_estimator::predict_proba(std::span<const double> x) const {
    return std::clamp(sigmoid(net_->logit(x)), 0.0, 1.0);
}

void neural_estimator::save(byte_writer &out) const {
    net_->save_architecture(out);
    out.put_f64_array(net_->parameters());
}

neural_estimator neural_estimator::load(byte_reader &in, model_family family) {
    rng unused{ 0 };
    std::unique_ptr<network> net;
    const auto input_length = static_cast<std::size_t>(in.u64());
    switch (family) {
        case model_family::rnn: {
            rnn_params p;
            p.hidden_units = static_cast<std::size_t>(in.u64());
            net = std::make_unique<rnn_network>(input_length, p, unused);
            break;
        }
        case model_family::cnn: {
            cnn_params p;
            p.filters = static_cast<std::size_t>(in.u64());
            p.kernel_width = static_cast<std::size_t>(in.u64());
            p.dense_units = static_cast<std::size_t>(in.u64());
            net = std::make_unique<cnn_network>(input_length, p, unused);
            break;
        }
        case model_family::transformer: {
            transformer_params p;
            p.heads = static_cast<std::size_t>(in.u64());
            p.model_width = static_cast<std::size_t>(in.u64());
            p.feed_forward_units = static_cast<std::size_t>(in.u64());
            net = std::make_unique<transformer_network>(input_length, p, unused);
            break;
        }
        default: throw error{ error_code::corrupt_artifact, "payload is not a neural network" };
    }
    const std::vector<double> params = in.f64_array();
    if (params.size() != net->parameter_count()) {
        throw error{ error_code::corrupt_artifact, "neural payload has " + std::to_string(params.size()) + " parameters, architecture needs " + std::to_string(net->parameter_count()) };
    }
    std::copy(params.begin(), params.end(), net->parameters().begin());
    return neural_estimator{ std::move(net) };
}

}  // namespace neuro::classifiers
