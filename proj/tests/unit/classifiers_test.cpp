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

#include "neuro/classifiers/artifact.hpp"
#include "neuro/classifiers/model.hpp"
#include "neuro/classifiers/neural.hpp"
#include "neuro/classifiers/random_forest.hpp"
#include "neuro/classifiers/standardizer.hpp"
#include "neuro/error.hpp"
#include "neuro/process.hpp"
#include "neuro/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

namespace {

using namespace neuro;
using namespace neuro::classifiers;

struct labeled_data {
    feature_matrix x;
    std::vector<label> y;
};

// Two unit-variance clusters centred on opposite points of the diagonal and
// separated by a gap of 5 standard deviations along it.
labeled_data separable_blobs(std::size_t per_class, std::size_t dim, std::uint64_t seed) {
    neuro::rng r{ seed };
    const std::vector<double> direction(dim, 1.0);
    const double norm = std::sqrt(static_cast<double>(dim));
    labeled_data out{ feature_matrix{ 0, dim }, {} };
    for (std::size_t i = 0; i < 2 * per_class; ++i) {
        const bool pt = i % 2 == 1;
        std::vector<double> row(dim);
        double along = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            row[j] = r.normal();
            along += row[j] * direction[j] / norm;
        }
        const double target = pt ? 2.5 + std::abs(r.normal()) : -2.5 - std::abs(r.normal());
        for (std::size_t j = 0; j < dim; ++j) {
            row[j] += (target - along) * direction[j] / norm;
        }
        out.x.push_row(row);
        out.y.push_back(pt ? label::pt : label::hc);
    }
    return out;
}

// Classic perceptron; returns true when it reaches zero training errors.
bool perceptron_separates(const labeled_data &d) {
    std::vector<double> w(d.x.cols() + 1, 0.0);
    for (int epoch = 0; epoch < 1000; ++epoch) {
        std::size_t mistakes = 0;
        for (std::size_t i = 0; i < d.x.rows(); ++i) {
            const double y = d.y[i] == label::pt ? 1.0 : -1.0;
            double s = w.back();
            for (std::size_t j = 0; j < d.x.cols(); ++j) {
                s += w[j] * d.x(i, j);
            }
            if (y * s <= 0.0) {
                ++mistakes;
                for (std::size_t j = 0; j < d.x.cols(); ++j) {
                    w[j] += y * d.x(i, j);
                }
                w.back() += y;
            }
        }
        if (mistakes == 0) {
            return true;
        }
    }
    return false;
}

error_code code_of(auto &&fn) {
    try {
        fn();
    } catch (const error &e) {
        return e.code();
    }
    return error_code::io_error;
}

TEST(ParameterCounts, DefaultArchitectures) {
    const std::size_t h = 50;
    EXPECT_EQ(rnn_network::count_parameters(50), h + h * h + h + h + 1);
    EXPECT_EQ(rnn_network::count_parameters(50), 2651U);

    const std::size_t f = 64;
    const std::size_t k = 3;
    const std::size_t u = 128;
    EXPECT_EQ(cnn_network::count_parameters(64, 3, 128), (f * k + f) + (u * f + u) + (u + 1));
    EXPECT_EQ(cnn_network::count_parameters(64, 3, 128), 8705U);

    const std::size_t d = 32;
    const std::size_t ff = 128;
    const std::size_t embed = 2 * d;
    const std::size_t attention = 4 * (d * d + d);
    const std::size_t norms = 2 * (2 * d);
    const std::size_t feed_forward = (d * ff + ff) + (ff * d + d);
    EXPECT_EQ(transformer_network::count_parameters(32, 128), embed + attention + norms + feed_forward + d + 1);
    EXPECT_EQ(transformer_network::count_parameters(32, 128), 12801U);
}

TEST(ParameterCounts, BuiltNetworksMatchAndIgnoreInputLength) {
    for (const std::size_t dim : { 8UL, 64UL, 72UL }) {
        for (const model_family fam : { model_family::rnn, model_family::cnn, model_family::transformer }) {
            neuro::rng init{ 1 };
            const auto net = make_network(model_spec::defaults(fam, feature_kind::fused, dim), init);
            const std::size_t expected = fam == model_family::rnn ? 2651U : fam == model_family::cnn ? 8705U : 12801U;
            EXPECT_EQ(net->parameter_count(), expected) << to_string(fam) << " dim " << dim;
        }
    }
}

TEST(Hyperparameters, Defaults) {
    const auto rnn = std::get<rnn_params>(default_hyperparams(model_family::rnn));
    EXPECT_EQ(rnn.hidden_units, 50U);
    EXPECT_EQ(rnn.optimizer.epochs, 50U);
    EXPECT_EQ(rnn.optimizer.batch_size, 16U);
    EXPECT_DOUBLE_EQ(rnn.optimizer.learning_rate, 1e-3);
    const auto cnn = std::get<cnn_params>(default_hyperparams(model_family::cnn));
    EXPECT_EQ(cnn.filters, 64U);
    EXPECT_EQ(cnn.kernel_width, 3U);
    EXPECT_EQ(cnn.dense_units, 128U);
    EXPECT_EQ(cnn.optimizer.epochs, 50U);
    const auto tf = std::get<transformer_params>(default_hyperparams(model_family::transformer));
    EXPECT_EQ(tf.heads, 4U);
    EXPECT_EQ(tf.model_width, 32U);
    EXPECT_EQ(tf.feed_forward_units, 128U);
    EXPECT_EQ(tf.optimizer.epochs, 50U);
    EXPECT_EQ(std::get<rf_params>(default_hyperparams(model_family::rf)).trees, 100U);
    EXPECT_DOUBLE_EQ(std::get<svm_params>(default_hyperparams(model_family::svm)).c, 1.0);
}

TEST(Hyperparameters, TrainingRunsFiftyEpochs) {
    const labeled_data d = separable_blobs(10, 4, 3);
    for (const model_family fam : { model_family::rnn, model_family::cnn, model_family::transformer }) {
        const trained_model m = train(model_spec::defaults(fam, feature_kind::linguistic, 4, 1), d.x, d.y);
        EXPECT_EQ(m.metadata.epochs_run, 50U) << to_string(fam);
        ASSERT_EQ(m.metadata.epoch_loss.size(), 50U);
        EXPECT_LE(m.metadata.epoch_loss.back(), m.metadata.epoch_loss.front()) << to_string(fam);
    }
}

void check_gradient(network &net, std::size_t dim, std::uint64_t seed) {
    neuro::rng r{ seed };
    std::vector<double> x(dim);
    for (double &v : x) {
        v = r.normal();
    }
    for (const double target : { 0.0, 1.0 }) {
        std::vector<double> grad(net.parameter_count(), 0.0);
        const double loss = net.accumulate_gradient(x, target, grad);
        EXPECT_NEAR(loss, bce_with_logit(net.logit(x), target), 1e-12);
        auto params = net.parameters();
        for (std::size_t i = 0; i < params.size(); i += 1 + params.size() / 60) {
            const double saved = params[i];
            const double h = 1e-5;
            params[i] = saved + h;
            const double up = bce_with_logit(net.logit(x), target);
            params[i] = saved - h;
            const double down = bce_with_logit(net.logit(x), target);
            params[i] = saved;
            const double numeric = (up - down) / (2 * h);
            EXPECT_NEAR(grad[i], numeric, 1e-6 + 1e-4 * std::abs(numeric)) << "parameter " << i;
        }
    }
}

TEST(Gradients, RnnMatchesFiniteDifferences) {
    neuro::rng init{ 2 };
    rnn_params p;
    p.hidden_units = 6;
    rnn_network net{ 7, p, init };
    check_gradient(net, 7, 10);
}

TEST(Gradients, CnnMatchesFiniteDifferences) {
    neuro::rng init{ 3 };
    cnn_params p;
    p.filters = 5;
    p.dense_units = 7;
    cnn_network net{ 9, p, init };
    check_gradient(net, 9, 11);
}

TEST(Gradients, TransformerMatchesFiniteDifferences) {
    neuro::rng init{ 4 };
    transformer_params p;
    p.heads = 2;
    p.model_width = 8;
    p.feed_forward_units = 12;
    transformer_network net{ 6, p, init };
    check_gradient(net, 6, 12);
}

TEST(Losses, StableBinaryCrossEntropy) {
    EXPECT_NEAR(bce_with_logit(0.0, 1.0), std::log(2.0), 1e-15);
    EXPECT_NEAR(bce_with_logit(800.0, 1.0), 0.0, 1e-15);
    EXPECT_NEAR(bce_with_logit(-800.0, 1.0), 800.0, 1e-9);
    EXPECT_DOUBLE_EQ(sigmoid(0.0), 0.5);
    EXPECT_TRUE(std::isfinite(sigmoid(-1000.0)));
}

TEST(Separable, EveryFamilyFitsTrainingData) {
    const labeled_data d = separable_blobs(20, 8, 42);
    ASSERT_TRUE(perceptron_separates(d));
    for (const model_family fam : all_families) {
        const trained_model m = train(model_spec::defaults(fam, feature_kind::linguistic, 8, 5), d.x, d.y);
        std::size_t correct = 0;
        for (std::size_t i = 0; i < d.x.rows(); ++i) {
            correct += classify(m, d.x.row(i)) == d.y[i] ? 1 : 0;
        }
        EXPECT_EQ(correct, d.x.rows()) << to_string(fam);
    }
}

TEST(Determinism, SameSeedSameModel) {
    const labeled_data d = separable_blobs(12, 6, 8);
    neuro::rng r{ 99 };
    std::vector<double> probe(6);
    for (double &v : probe) {
        v = r.normal();
    }
    for (const model_family fam : all_families) {
        const model_spec spec = model_spec::defaults(fam, feature_kind::linguistic, 6, 21);
        const trained_model a = train(spec, d.x, d.y);
        const trained_model b = train(spec, d.x, d.y);
        EXPECT_EQ(predict_proba(a, probe), predict_proba(b, probe)) << to_string(fam);
        EXPECT_EQ(a.metadata.epoch_loss, b.metadata.epoch_loss);
    }
}

TEST(Probabilities, StayInUnitInterval) {
    const labeled_data d = separable_blobs(10, 5, 13);
    neuro::rng r{ 14 };
    for (const model_family fam : all_families) {
        const trained_model m = train(model_spec::defaults(fam, feature_kind::linguistic, 5, 2), d.x, d.y);
        for (int i = 0; i < 1000; ++i) {
            std::vector<double> x(5);
            for (double &v : x) {
                v = r.normal(0.0, 10.0);
            }
            const double p = predict_proba(m, x);
            ASSERT_TRUE(p >= 0.0 && p <= 1.0) << to_string(fam) << " " << p;
        }
    }
}

TEST(RandomForest, UnanimousHcTreesGiveZero) {
    decision_tree leaf;
    leaf.nodes.push_back({});
    const auto forest = random_forest_estimator::from_trees(std::vector<decision_tree>(7, leaf));
    const std::vector<double> x{ 1.0, 2.0 };
    EXPECT_DOUBLE_EQ(forest.predict_proba(x), 0.0);
}

TEST(RandomForest, VoteShare) {
    decision_tree hc;
    hc.nodes.push_back({});
    decision_tree pt;
    pt.nodes.push_back({ -1, 0.0, 0, 0, 1 });
    const auto forest = random_forest_estimator::from_trees({ hc, pt, pt, pt });
    EXPECT_DOUBLE_EQ(forest.predict_proba(std::vector<double>{ 0.0 }), 0.75);
}

TEST(Threshold, HalfIsPt) {
    EXPECT_EQ(threshold(0.5), label::pt);
    EXPECT_EQ(threshold(0.4999999), label::hc);
    EXPECT_EQ(threshold(1.0), label::pt);
    EXPECT_EQ(threshold(0.0), label::hc);
}

TEST(Standardizer, FitsTrainingRowsOnly) {
    const labeled_data d = separable_blobs(8, 3, 5);
    const trained_model m = train(model_spec::defaults(model_family::svm, feature_kind::linguistic, 3), d.x, d.y);
    EXPECT_EQ(m.metadata.scaler, standardizer::fit(d.x));
    EXPECT_EQ(m.metadata.training_rows, d.x.rows());
}

TEST(Standardizer, HeldOutRowsNeverTouchStatistics) {
    const labeled_data d = separable_blobs(10, 4, 6);
    const labeled_data held = separable_blobs(50, 4, 7);
    const model_spec spec = model_spec::defaults(model_family::cnn, feature_kind::linguistic, 4, 3);
    const trained_model a = train(spec, d.x, d.y);
    const trained_model b = train(spec, d.x, d.y);
    for (std::size_t i = 0; i < held.x.rows(); ++i) {
        EXPECT_EQ(classify(b, held.x.row(i)), threshold(predict_proba(b, held.x.row(i))));
    }
    EXPECT_EQ(a.metadata.scaler, b.metadata.scaler);
}

TEST(Standardizer, ConstantColumnMapsToZero) {
    feature_matrix x{ 0, 2 };
    x.push_row(std::vector{ 1.0, 5.0 });
    x.push_row(std::vector{ 3.0, 5.0 });
    const standardizer s = standardizer::fit(x);
    EXPECT_DOUBLE_EQ(s.mean[0], 2.0);
    EXPECT_DOUBLE_EQ(s.stddev[1], 1.0);
    const auto z = s.apply(std::vector{ 3.0, 5.0 });
    EXPECT_DOUBLE_EQ(z[1], 0.0);
    EXPECT_GT(z[0], 0.0);
}

TEST(FuseFeatures, LinguisticThenParalinguistic) {
    linguistic::linguistic_features ling;
    ling.avg_word_len_chars = 4.0;
    ling.switch_rate_per_min = 9.0;
    paralinguistic::paralinguistic_embedding para{ { 0.1, -0.2, 0.3 } };
    const auto fused = fuse_features(ling, para);
    ASSERT_EQ(fused.size(), linguistic::linguistic_features::dimension + 3);
    const auto head = ling.to_array();
    EXPECT_TRUE(std::equal(head.begin(), head.end(), fused.begin()));
    EXPECT_TRUE(std::equal(para.values.begin(), para.values.end(), fused.begin() + linguistic::linguistic_features::dimension));
}

TEST(Artifact, RoundTripPreservesPredictions) {
    const labeled_data d = separable_blobs(10, 5, 17);
    const auto dir = unique_temp_path("neuro-models-", "");
    neuro::rng r{ 18 };
    for (const model_family fam : all_families) {
        trained_model m = train(model_spec::defaults(fam, feature_kind::linguistic, 5, 4), d.x, d.y);
        m.evaluation = cv_scores{ 5, 4, { 1, 1, 1, 1, 1 }, { 1, 1, 1, 1, 1 }, 1.0, 1.0 };
        const std::string id = save_model(m, dir);
        EXPECT_EQ(id.size(), 12U);
        const trained_model back = load_model(dir / (id + ".neuro"));
        EXPECT_EQ(back.spec.family, fam);
        EXPECT_EQ(back.metadata, m.metadata);
        EXPECT_EQ(back.evaluation, m.evaluation);
        EXPECT_EQ(back.created_at, m.created_at);
        for (int i = 0; i < 50; ++i) {
            std::vector<double> x(5);
            for (double &v : x) {
                v = r.normal(0.0, 3.0);
            }
            EXPECT_EQ(predict_proba(back, x), predict_proba(m, x));
        }
        EXPECT_EQ(content_model_id(serialize_model(back)), id);
    }
    std::filesystem::remove_all(dir);
}

TEST(Artifact, CorruptBytesRejected) {
    const labeled_data d = separable_blobs(6, 3, 19);
    auto bytes = serialize_model(train(model_spec::defaults(model_family::rf, feature_kind::linguistic, 3), d.x, d.y));
    bytes[0] = std::byte{ 'X' };
    EXPECT_EQ(code_of([&] { (void)parse_model(bytes); }), error_code::corrupt_artifact);
    EXPECT_EQ(code_of([&] { (void)parse_model(std::span{ bytes }.first(20)); }), error_code::corrupt_artifact);
}

TEST(TrainErrors, InvalidInputs) {
    const labeled_data d = separable_blobs(5, 3, 20);
    const model_spec spec = model_spec::defaults(model_family::svm, feature_kind::linguistic, 3);
    EXPECT_EQ(code_of([&] { (void)train(spec, d.x, std::span{ d.y }.first(4)); }), error_code::length_mismatch);
    EXPECT_EQ(code_of([&] { (void)train(model_spec::defaults(model_family::svm, feature_kind::linguistic, 4), d.x, d.y); }),
              error_code::dimension_mismatch);
    const std::vector<label> same(d.y.size(), label::hc);
    EXPECT_EQ(code_of([&] { (void)train(spec, d.x, same); }), error_code::degenerate_labels);
    feature_matrix bad = d.x;
    bad(2, 1) = std::nan("");
    EXPECT_EQ(code_of([&] { (void)train(spec, bad, d.y); }), error_code::non_finite_input);
}

TEST(Labels, EncodeAndParse) {
    EXPECT_EQ(parse_label("PT"), label::pt);
    EXPECT_EQ(parse_label("HC"), label::hc);
    EXPECT_THROW((void)parse_label("XX"), error);
    EXPECT_EQ(parse_family("transformer"), model_family::transformer);
    EXPECT_THROW((void)parse_family("lstm"), error);
    const std::vector<label> ls{ label::hc, label::pt };
    EXPECT_EQ(encode_labels(ls), (std::vector<double>{ 0.0, 1.0 }));
}

}  // namespace
