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

#ifndef NEURO_CLASSIFIERS_NEURAL_HPP_
#define NEURO_CLASSIFIERS_NEURAL_HPP_

#include "neuro/classifiers/estimator.hpp"
#include "neuro/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace neuro::classifiers {

/// A D-dimensional input is read as a length-D sequence of scalars with a
/// single channel. All networks end in one sigmoid unit; they expose the
/// pre-sigmoid logit and the binary cross-entropy gradient for one example.
class network {
  public:
    virtual ~network() = default;

    [[nodiscard]] virtual model_family family() const noexcept = 0;
    [[nodiscard]] std::size_t parameter_count() const noexcept { return params_.size(); }
    [[nodiscard]] std::span<double> parameters() noexcept { return params_; }
    [[nodiscard]] std::span<const double> parameters() const noexcept { return params_; }
    [[nodiscard]] std::size_t input_length() const noexcept { return input_length_; }

    [[nodiscard]] virtual double logit(std::span<const double> x) const = 0;

    /// Adds d(loss)/d(parameters) into `grad` and returns the loss, where
    /// loss is binary cross-entropy of sigmoid(logit(x)) against `target`.
    virtual double accumulate_gradient(std::span<const double> x, double target, std::span<double> grad) const = 0;

    virtual void save_architecture(byte_writer &out) const = 0;

  protected:
    explicit network(std::size_t input_length) :
        input_length_{ input_length } {}

    std::size_t input_length_;
    std::vector<double> params_;
};

/// Elman recurrent layer (tanh) over the sequence; the last hidden state
/// feeds the sigmoid output.
class rnn_network final : public network {
  public:
    rnn_network(std::size_t input_length, const rnn_params &params, rng &init);

    [[nodiscard]] static std::size_t count_parameters(std::size_t hidden_units) noexcept;

    [[nodiscard]] model_family family() const noexcept override { return model_family::rnn; }
    [[nodiscard]] double logit(std::span<const double> x) const override;
    double accumulate_gradient(std::span<const double> x, double target, std::span<double> grad) const override;
    void save_architecture(byte_writer &out) const override;

    [[nodiscard]] std::size_t hidden_units() const noexcept { return hidden_; }

  private:
    std::size_t hidden_;
};

/// Valid 1-D convolution (ReLU) -> global max pool -> dense (ReLU) -> sigmoid.
class cnn_network final : public network {
  public:
    cnn_network(std::size_t input_length, const cnn_params &params, rng &init);

    [[nodiscard]] static std::size_t count_parameters(std::size_t filters, std::size_t kernel_width, std::size_t dense_units) noexcept;

    [[nodiscard]] model_family family() const noexcept override { return model_family::cnn; }
    [[nodiscard]] double logit(std::span<const double> x) const override;
    double accumulate_gradient(std::span<const double> x, double target, std::span<double> grad) const override;
    void save_architecture(byte_writer &out) const override;

    [[nodiscard]] std::size_t filters() const noexcept { return filters_; }
    [[nodiscard]] std::size_t kernel_width() const noexcept { return kernel_; }
    [[nodiscard]] std::size_t dense_units() const noexcept { return dense_; }

  private:
    std::size_t filters_;
    std::size_t kernel_;
    std::size_t dense_;
};

/**
 * One post-norm encoder block: learned scalar-to-width projection plus
 * sinusoidal positions, multi-head self-attention with residual and layer
 * norm, a ReLU feed-forward layer with residual and layer norm, mean pooling
 * over positions and a sigmoid unit.
 */
class transformer_network final : public network {
  public:
    transformer_network(std::size_t input_length, const transformer_params &params, rng &init);

    [[nodiscard]] static std::size_t count_parameters(std::size_t model_width, std::size_t feed_forward_units) noexcept;

    [[nodiscard]] model_family family() const noexcept override { return model_family::transformer; }
    [[nodiscard]] double logit(std::span<const double> x) const override;
    double accumulate_gradient(std::span<const double> x, double target, std::span<double> grad) const override;
    void save_architecture(byte_writer &out) const override;

    [[nodiscard]] std::size_t heads() const noexcept { return heads_; }
    [[nodiscard]] std::size_t model_width() const noexcept { return width_; }
    [[nodiscard]] std::size_t feed_forward_units() const noexcept { return ff_; }

  private:
    std::size_t heads_;
    std::size_t width_;
    std::size_t ff_;
};

/// Adaptive-moment optimizer over a flat parameter vector.
class adam {
  public:
    explicit adam(std::size_t size, double learning_rate = 1e-3, double beta1 = 0.9, double beta2 = 0.999, double epsilon = 1e-7);

    void step(std::span<double> params, std::span<const double> grad);

  private:
    double lr_;
    double beta1_;
    double beta2_;
    double eps_;
    std::size_t t_{ 0 };
    std::vector<double> m_;
    std::vector<double> v_;
};

struct training_trace {
    std::size_t epochs_run{ 0 };
    /// Mean training loss over each epoch, accumulated while the epoch runs.
    std::vector<double> epoch_loss;
};

/// Mini-batch training: each epoch shuffles the rows (seeded), averages the
/// gradient over batches of optimizer.batch_size and takes one Adam step per
/// batch.
training_trace train_network(network &net, const feature_matrix &standardized, std::span<const double> targets,
                             const optimizer_params &optimizer, std::uint64_t seed);

[[nodiscard]] std::unique_ptr<network> make_network(const model_spec &spec, rng &init);

class neural_estimator final : public estimator {
  public:
    explicit neural_estimator(std::unique_ptr<network> net) :
        net_{ std::move(net) } {}

    [[nodiscard]] static neural_estimator load(byte_reader &in, model_family family);

    [[nodiscard]] double predict_proba(std::span<const double> x) const override;
    [[nodiscard]] std::size_t parameter_count() const noexcept override { return net_->parameter_count(); }
    void save(byte_writer &out) const override;

    [[nodiscard]] const network &net() const noexcept { return *net_; }

  private:
    std::unique_ptr<network> net_;
};

[[nodiscard]] double sigmoid(double z) noexcept;
/// Numerically stable binary cross-entropy of sigmoid(z) against target.
[[nodiscard]] double bce_with_logit(double z, double target) noexcept;

}  // namespace neuro::classifiers

#endif  // NEURO_CLASSIFIERS_NEURAL_HPP_
