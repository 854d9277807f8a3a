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

#include "neuro/byte_io.hpp"
#include "neuro/classifiers/neural.hpp"
#include "neuro/classifiers/random_forest.hpp"
#include "neuro/classifiers/svm.hpp"
#include "neuro/error.hpp"
#include "neuro/rng.hpp"

#include <fmt/format.h>
#include <json.hpp>

namespace neuro::classifiers {

namespace {

using json = nlohmann::json;

json optimizer_json(const optimizer_params &o) {
    return { { "epochs", o.epochs }, { "batch_size", o.batch_size }, { "learning_rate", o.learning_rate } };
}

optimizer_params optimizer_from(const json &j) {
    optimizer_params o;
    o.epochs = j.at("epochs").get<std::size_t>();
    o.batch_size = j.at("batch_size").get<std::size_t>();
    o.learning_rate = j.at("learning_rate").get<double>();
    return o;
}

json params_json(const hyperparams &params) {
    return std::visit(
        [](const auto &p) -> json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, svm_params>) {
                return { { "c", p.c }, { "tolerance", p.tolerance }, { "platt_folds", p.platt_folds } };
            } else if constexpr (std::is_same_v<T, rf_params>) {
                return { { "trees", p.trees }, { "max_depth", p.max_depth }, { "min_samples_split", p.min_samples_split } };
            } else if constexpr (std::is_same_v<T, rnn_params>) {
                return { { "hidden_units", p.hidden_units }, { "optimizer", optimizer_json(p.optimizer) } };
            } else if constexpr (std::is_same_v<T, cnn_params>) {
                return { { "filters", p.filters }, { "kernel_width", p.kernel_width }, { "dense_units", p.dense_units }, { "optimizer", optimizer_json(p.optimizer) } };
            } else {
                return { { "heads", p.heads }, { "model_width", p.model_width }, { "feed_forward_units", p.feed_forward_units }, { "optimizer", optimizer_json(p.optimizer) } };
            }
        },
        params);
}

hyperparams params_from(model_family family, const json &j) {
    switch (family) {
        case model_family::svm: return svm_params{ j.at("c").get<double>(), j.at("tolerance").get<double>(), j.at("platt_folds").get<std::size_t>() };
        case model_family::rf: return rf_params{ j.at("trees").get<std::size_t>(), j.at("max_depth").get<std::size_t>(), j.at("min_samples_split").get<std::size_t>() };
        case model_family::rnn: return rnn_params{ j.at("hidden_units").get<std::size_t>(), optimizer_from(j.at("optimizer")) };
        case model_family::cnn:
            return cnn_params{ j.at("filters").get<std::size_t>(), j.at("kernel_width").get<std::size_t>(), j.at("dense_units").get<std::size_t>(), optimizer_from(j.at("optimizer")) };
        case model_family::transformer:
            return transformer_params{ j.at("heads").get<std::size_t>(), j.at("model_width").get<std::size_t>(), j.at("feed_forward_units").get<std::size_t>(), optimizer_from(j.at("optimizer")) };
    }
    throw error{ error_code::corrupt_artifact, "unknown family" };
}

json header_json(const trained_model &m) {
    json j;
    j["format"] = artifact_format;
    j["spec"] = {
        { "family", to_string(m.spec.family) },
        { "feature_kind", to_string(m.spec.features) },
        { "input_dim", m.spec.input_dim },
        { "seed", m.spec.seed },
        { "hyperparams", params_json(m.spec.params) },
    };
    j["train_metadata"] = {
        { "epochs_run", m.metadata.epochs_run },
        { "training_rows", m.metadata.training_rows },
        { "epoch_loss", m.metadata.epoch_loss },
        { "standardizer", { { "mean", m.metadata.scaler.mean }, { "stddev", m.metadata.scaler.stddev } } },
    };
    j["created_at"] = m.created_at;
    if (m.evaluation) {
        const cv_scores &e = *m.evaluation;
        j["evaluation"] = {
            { "k", e.k },
            { "seed", e.seed },
            { "fold_accuracy", e.fold_accuracy },
            { "fold_macro_f1", e.fold_macro_f1 },
            { "mean_accuracy", e.mean_accuracy },
            { "mean_macro_f1", e.mean_macro_f1 },
        };
    } else {
        j["evaluation"] = nullptr;
    }
    return j;
}

std::shared_ptr<const estimator> load_body(model_family family, byte_reader &in) {
    switch (family) {
        case model_family::svm: return std::make_shared<svm_estimator>(svm_estimator::load(in));
        case model_family::rf: return std::make_shared<random_forest_estimator>(random_forest_estimator::load(in));
        default: return std::make_shared<neural_estimator>(neural_estimator::load(in, family));
    }
}

}  // namespace

std::vector<std::byte> serialize_model(const trained_model &model) {
    if (!model.body) {
        throw error{ error_code::invalid_argument, "model has no trained body" };
    }
    byte_writer payload;
    model.body->save(payload);
    const std::string header = header_json(model).dump();

    byte_writer out;
    out.put_string(artifact_format);
    out.put_u8('\n');
    out.put_u64(header.size());
    out.put_string(header);
    out.put_u64(payload.bytes().size());
    out.put_bytes(payload.bytes());
    return out.release();
}

trained_model parse_model(std::span<const std::byte> bytes) {
    byte_reader in{ bytes };
    if (in.string(artifact_format.size()) != artifact_format || in.u8() != '\n') {
        throw error{ error_code::corrupt_artifact, fmt::format("not a {} artifact", artifact_format) };
    }
    const std::uint64_t header_len = in.u64();
    if (header_len > in.remaining()) {
        throw error{ error_code::corrupt_artifact, "header length exceeds artifact size" };
    }
    trained_model m;
    try {
        const json j = json::parse(in.string(static_cast<std::size_t>(header_len)));
        const json &spec = j.at("spec");
        m.spec.family = parse_family(spec.at("family").get<std::string>());
        m.spec.features = parse_feature_kind(spec.at("feature_kind").get<std::string>());
        m.spec.input_dim = spec.at("input_dim").get<std::size_t>();
        m.spec.seed = spec.at("seed").get<std::uint64_t>();
        m.spec.params = params_from(m.spec.family, spec.at("hyperparams"));
        const json &meta = j.at("train_metadata");
        m.metadata.epochs_run = meta.at("epochs_run").get<std::size_t>();
        m.metadata.training_rows = meta.at("training_rows").get<std::size_t>();
        m.metadata.epoch_loss = meta.at("epoch_loss").get<std::vector<double>>();
        m.metadata.scaler.mean = meta.at("standardizer").at("mean").get<std::vector<double>>();
        m.metadata.scaler.stddev = meta.at("standardizer").at("stddev").get<std::vector<double>>();
        m.created_at = j.at("created_at").get<std::string>();
        if (const json &e = j.at("evaluation"); !e.is_null()) {
            cv_scores s;
            s.k = e.at("k").get<std::size_t>();
            s.seed = e.at("seed").get<std::uint64_t>();
            s.fold_accuracy = e.at("fold_accuracy").get<std::vector<double>>();
            s.fold_macro_f1 = e.at("fold_macro_f1").get<std::vector<double>>();
            s.mean_accuracy = e.at("mean_accuracy").get<double>();
            s.mean_macro_f1 = e.at("mean_macro_f1").get<double>();
            m.evaluation = std::move(s);
        }
    } catch (const json::exception &e) {
        throw error{ error_code::corrupt_artifact, fmt::format("artifact header: {}", e.what()) };
    } catch (const error &e) {
        if (e.code() == error_code::corrupt_artifact) {
            throw;
        }
        throw error{ error_code::corrupt_artifact, fmt::format("artifact header: {}", e.what()) };
    }
    if (m.metadata.scaler.mean.size() != m.spec.input_dim || m.metadata.scaler.stddev.size() != m.spec.input_dim) {
        throw error{ error_code::corrupt_artifact, "standardizer size does not match input_dim" };
    }

    const std::uint64_t payload_len = in.u64();
    if (payload_len != in.remaining()) {
        throw error{ error_code::corrupt_artifact, "payload length does not match artifact size" };
    }
    byte_reader body{ in.take(static_cast<std::size_t>(payload_len)) };
    m.body = load_body(m.spec.family, body);
    if (!body.at_end()) {
        throw error{ error_code::corrupt_artifact, "trailing bytes after estimator payload" };
    }
    return m;
}

std::string content_model_id(std::span<const std::byte> artifact_bytes) {
    return fmt::format("{:016x}", hash_bytes(artifact_bytes)).substr(0, 12);
}

std::string save_model(const trained_model &model, const std::filesystem::path &dir) {
    const std::vector<std::byte> bytes = serialize_model(model);
    const std::string id = content_model_id(bytes);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw error{ error_code::io_error, fmt::format("cannot create {}: {}", dir.string(), ec.message()) };
    }
    write_file_bytes(dir / (id + ".neuro"), bytes);
    return id;
}

trained_model load_model(const std::filesystem::path &file) {
    return parse_model(read_file_bytes(file));
}

}  // namespace neuro::classifiers
