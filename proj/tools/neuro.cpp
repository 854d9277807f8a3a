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
#include "neuro/dataset.hpp"
#include "neuro/error.hpp"
#include "neuro/evaluation.hpp"
#include "neuro/pipeline.hpp"
#include "neuro/service/config.hpp"
#include "neuro/service/model_store.hpp"
#include "neuro/service/prediction.hpp"
#include "neuro/service/server.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <chrono>
#include <csignal>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace neuro;
using classifiers::feature_kind;
using classifiers::model_family;

constexpr int exit_ok = 0;
constexpr int exit_runtime = 1;
constexpr int exit_usage = 2;

// Usage problems detected after CLI11 has parsed the flags.
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Runtime failure annotated with the pipeline stage it came from.
struct stage_error : std::runtime_error {
    stage_error(std::string_view stage, const std::exception &e) :
        std::runtime_error{ fmt::format("{}: {}", stage, describe(e)) } {}

    static std::string describe(const std::exception &e) {
        if (const auto *ne = dynamic_cast<const error *>(&e)) {
            return fmt::format("{}: {}", ne->code_name(), ne->what());
        }
        return e.what();
    }
};

template <typename F>
auto stage(std::string_view name, F &&body) {
    try {
        return body();
    } catch (const stage_error &) {
        throw;
    } catch (const std::exception &e) {
        throw stage_error{ name, e };
    }
}

std::vector<std::string> split_list(const std::string &csv) {
    std::vector<std::string> out;
    std::stringstream ss{ csv };
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

template <typename T, std::size_t N, typename Parse>
std::vector<T> parse_selection(const std::string &arg, const std::array<T, N> &all, Parse parse, std::string_view flag) {
    if (arg == "all") {
        return { all.begin(), all.end() };
    }
    std::vector<T> out;
    for (const std::string &name : split_list(arg)) {
        try {
            out.push_back(parse(name));
        } catch (const error &e) {
            throw usage_error{ e.what() };
        }
    }
    if (out.empty()) {
        throw usage_error{ fmt::format("{} needs at least one value", flag) };
    }
    return out;
}

std::optional<std::filesystem::path> as_path(const std::optional<std::string> &s) {
    return s ? std::optional<std::filesystem::path>{ *s } : std::nullopt;
}

// Config file and NEURO_* variables, then flags.
struct pipeline_flags {
    std::optional<std::string> config_file;
    std::optional<std::string> backends;
    std::optional<std::string> embed_cache;

    void attach(CLI::App &cmd) {
        cmd.add_option("--config", config_file, "key=value settings file (NEURO_* keys)")->check(CLI::ExistingFile);
        cmd.add_option("--backends", backends, "stub or real (default: NEURO_BACKENDS, else stub)")->check(CLI::IsMember({ "stub", "real" }));
        cmd.add_option("--embed-cache", embed_cache, "Directory caching frame embeddings");
    }

    [[nodiscard]] service::service_config load() const {
        service::service_config c = stage("config", [&] { return service::load_config(as_path(config_file)); });
        if (backends) {
            c.backends.mode = pipeline::parse_backend_mode(*backends);
        }
        if (embed_cache) {
            c.backends.embedding_cache_dir = *embed_cache;
        }
        return c;
    }
};

pipeline::corpus_features load_corpus(const std::string &manifest_path, const pipeline::backend_config &config) {
    const dataset::manifest m = stage("manifest", [&] { return dataset::load_manifest(manifest_path); });
    const pipeline::backends b = stage("backends", [&] { return pipeline::make_backends(config); });
    return stage("features", [&] {
        return pipeline::extract_corpus(m, b, [](std::size_t done, std::size_t total) {
            if (done == total || done % 20 == 0) {
                std::cerr << fmt::format("features {}/{}\n", done, total);
            }
        });
    });
}

classifiers::model_spec make_spec(model_family family, feature_kind kind, std::size_t dim, std::uint64_t seed, std::size_t epochs) {
    classifiers::model_spec spec = classifiers::model_spec::defaults(family, kind, dim, seed);
    if (classifiers::optimizer_params *opt = spec.optimizer()) {
        opt->epochs = epochs;
    }
    return spec;
}

// ------------------------------------------------------------------ synth

struct synth_args {
    std::size_t n_per_class{ 30 };
    std::string profile{ "separable" };
    std::uint64_t seed{ 0 };
    std::string out;
};

int run_synth(const synth_args &a) {
    const dataset::synthetic_corpus c = stage("synth", [&] {
        return dataset::generate_synthetic(a.n_per_class, dataset::parse_profile(a.profile), a.seed, a.out);
    });
    const nlohmann::json j = {
        { "manifest", c.manifest_path.string() },
        { "entries", c.corpus.entries.size() },
        { "profile", a.profile },
        { "seed", a.seed },
        { "linear_probe_accuracy", c.linear_probe_accuracy },
    };
    std::cout << j.dump(2) << "\n";
    return exit_ok;
}

// ------------------------------------------------------------------- eval

struct eval_args {
    std::string manifest;
    std::string families{ "all" };
    std::string features{ "all" };
    std::size_t k{ 5 };
    std::uint64_t seed{ 0 };
    std::size_t epochs{ 50 };
    std::optional<std::string> out;
    bool parallel{ false };
    pipeline_flags pipe;
};

int run_eval(const eval_args &a) {
    const auto families = parse_selection(a.families, classifiers::all_families, classifiers::parse_family, "--families");
    const auto kinds = parse_selection(a.features, classifiers::all_feature_kinds, classifiers::parse_feature_kind, "--features");
    const service::service_config config = a.pipe.load();
    const pipeline::corpus_features corpus = load_corpus(a.manifest, config.backends);
    const evaluation::fold_assignment folds = stage("folds", [&] { return evaluation::stratified_kfold(corpus.labels, a.k, a.seed); });

    evaluation::eval_report report;
    report.k = a.k;
    report.seed = a.seed;
    evaluation::cv_options options;
    options.parallel_folds = a.parallel;
    for (const feature_kind kind : kinds) {
        const classifiers::feature_matrix x = corpus.matrix(kind);
        const evaluation::matrix_source source{ x, corpus.labels };
        for (const model_family family : families) {
            const classifiers::model_spec spec = make_spec(family, kind, x.cols(), a.seed, a.epochs);
            const std::string name = fmt::format("eval {} {}", classifiers::to_string(family), classifiers::to_string(kind));
            evaluation::report_row row = stage(name, [&] { return evaluation::evaluate_cv(source, spec, folds, options); });
            std::cerr << fmt::format("{:<12}{:<16}{}\n", classifiers::to_string(family), classifiers::to_string(kind),
                                     evaluation::format_scores(row.mean_accuracy, row.mean_macro_f1));
            report.rows.push_back(std::move(row));
        }
    }
    const std::string json_text = evaluation::to_json(report);
    if (a.out) {
        stage("write report", [&] {
            write_text_file(*a.out, json_text + "\n");
            return 0;
        });
    }
    std::cerr << "\n" << evaluation::render_table(report);
    std::cout << json_text << "\n";
    return exit_ok;
}

// ------------------------------------------------------------------ train

struct train_args {
    std::string manifest;
    std::string family{ "cnn" };
    std::string features{ "paralinguistic" };
    std::uint64_t seed{ 0 };
    std::size_t epochs{ 50 };
    std::size_t k{ 5 };
    bool skip_cv{ false };
    std::optional<std::string> out;
    pipeline_flags pipe;
};

int run_train(const train_args &a) {
    model_family family{};
    feature_kind kind{};
    try {
        family = classifiers::parse_family(a.family);
        kind = classifiers::parse_feature_kind(a.features);
    } catch (const error &e) {
        throw usage_error{ e.what() };
    }
    const service::service_config config = a.pipe.load();
    const std::filesystem::path model_dir = a.out ? std::filesystem::path{ *a.out } : config.model_dir;
    const pipeline::corpus_features corpus = load_corpus(a.manifest, config.backends);
    const classifiers::feature_matrix x = corpus.matrix(kind);
    const classifiers::model_spec spec = make_spec(family, kind, x.cols(), a.seed, a.epochs);

    std::optional<classifiers::cv_scores> scores;
    if (!a.skip_cv) {
        scores = stage("cross-validation", [&] {
            const evaluation::fold_assignment folds = evaluation::stratified_kfold(corpus.labels, a.k, a.seed);
            const evaluation::matrix_source source{ x, corpus.labels };
            return evaluation::evaluate_cv(source, spec, folds).scores(a.k, a.seed);
        });
        std::cerr << fmt::format("cross-validated {}\n", evaluation::format_scores(scores->mean_accuracy, scores->mean_macro_f1));
    }
    classifiers::trained_model model = stage("train", [&] { return classifiers::train(spec, x, corpus.labels); });
    model.evaluation = scores;
    const std::string id = stage("store", [&] { return classifiers::save_model(model, model_dir); });

    nlohmann::json j = {
        { "model_id", id },
        { "path", (model_dir / (id + ".neuro")).string() },
        { "family", classifiers::to_string(family) },
        { "feature_kind", classifiers::to_string(kind) },
        { "input_dim", spec.input_dim },
        { "epochs_run", model.metadata.epochs_run },
        { "created_at", model.created_at },
    };
    if (scores) {
        j["mean_accuracy"] = scores->mean_accuracy;
        j["mean_macro_f1"] = scores->mean_macro_f1;
    }
    std::cout << j.dump(2) << "\n";
    return exit_ok;
}

// ---------------------------------------------------------------- predict

struct predict_args {
    std::optional<std::string> model;
    std::optional<std::string> model_dir;
    std::string audio;
    pipeline_flags pipe;
};

int run_predict(const predict_args &a) {
    const service::service_config config = a.pipe.load();
    const service::model_store store{ a.model_dir ? std::filesystem::path{ *a.model_dir } : config.model_dir };
    std::string id;
    if (a.model) {
        id = *a.model;
    } else {
        const auto best = stage("model", [&] { return store.default_model_id(); });
        if (!best) {
            throw stage_error{ "model", error{ error_code::unknown_model, "no models in " + store.directory().string() } };
        }
        id = *best;
    }
    const auto model = stage("model", [&] { return store.get(id); });
    const auto decode_start = std::chrono::steady_clock::now();
    const audio::audio_clip clip = stage("decode", [&] { return audio::load_for_pipeline(read_file_bytes(a.audio)); });
    const double decode_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - decode_start).count();
    const pipeline::backends b = stage("backends", [&] { return pipeline::make_backends(config.backends); });
    service::prediction_result r = stage("predict", [&] { return service::predict_clip(clip, *model, id, b); });
    r.timing.decode = decode_ms;
    r.timing.total += decode_ms;
    std::cout << service::to_json_line(r) << "\n";
    return exit_ok;
}

// ------------------------------------------------------------------ serve

service::server *active_server = nullptr;

extern "C" void handle_signal(int /*sig*/) {
    if (active_server != nullptr) {
        active_server->stop();
    }
}

struct serve_args {
    std::optional<std::string> config_file;
    std::optional<int> port;
};

int run_serve(const serve_args &a) {
    service::service_config config = stage("config", [&] { return service::load_config(as_path(a.config_file)); });
    if (a.port) {
        config.port = *a.port;
    }
    const auto srv = stage("startup", [&] { return std::make_unique<service::server>(config); });
    const int port = stage("bind", [&] { return srv->bind(); });
    std::cerr << fmt::format("neuro service listening on http://{}:{}\n", config.host, port);
    active_server = srv.get();
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    srv->run();
    active_server = nullptr;
    return exit_ok;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{ "Screening pipeline for code-switched child speech" };
    app.require_subcommand(1);
    app.set_version_flag("--version", "neuro 0.1.0");

    synth_args synth;
    CLI::App *synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus");
    synth_cmd->add_option("--n-per-class", synth.n_per_class, "Samples per class")->check(CLI::Range(std::size_t{ dataset::min_synthetic_per_class }, std::size_t{ 100000 }));
    synth_cmd->add_option("--profile", synth.profile, "separable or overlapped")->check(CLI::IsMember({ "separable", "overlapped" }));
    synth_cmd->add_option("--seed", synth.seed, "Random seed (default 0)");
    synth_cmd->add_option("--out", synth.out, "Output directory")->required();

    eval_args eval;
    CLI::App *eval_cmd = app.add_subcommand("eval", "Cross-validate model families and print the score table");
    eval_cmd->add_option("--manifest", eval.manifest, "Manifest CSV")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--families", eval.families, "all or a comma list of svm,rf,rnn,cnn,transformer");
    eval_cmd->add_option("--features", eval.features, "all or a comma list of linguistic,paralinguistic,fused");
    eval_cmd->add_option("--k", eval.k, "Number of folds")->check(CLI::Range(std::size_t{ 2 }, std::size_t{ 1000 }));
    eval_cmd->add_option("--seed", eval.seed, "Random seed (default 0)");
    eval_cmd->add_option("--epochs", eval.epochs, "Epochs for neural families")->check(CLI::Range(std::size_t{ 1 }, std::size_t{ 100000 }));
    eval_cmd->add_option("--out", eval.out, "Write the report JSON here");
    eval_cmd->add_flag("--parallel-folds", eval.parallel, "Train the folds of each row concurrently");
    eval.pipe.attach(*eval_cmd);

    train_args train;
    CLI::App *train_cmd = app.add_subcommand("train", "Train a model and add it to a model directory");
    train_cmd->add_option("--manifest", train.manifest, "Manifest CSV")->required()->check(CLI::ExistingFile);
    train_cmd->add_option("--family", train.family, "svm, rf, rnn, cnn or transformer");
    train_cmd->add_option("--features", train.features, "linguistic, paralinguistic or fused");
    train_cmd->add_option("--seed", train.seed, "Random seed (default 0)");
    train_cmd->add_option("--epochs", train.epochs, "Epochs for neural families")->check(CLI::Range(std::size_t{ 1 }, std::size_t{ 100000 }));
    train_cmd->add_option("--k", train.k, "Folds for the attached cross-validation scores")->check(CLI::Range(std::size_t{ 2 }, std::size_t{ 1000 }));
    train_cmd->add_flag("--no-cv", train.skip_cv, "Skip cross-validation; the model carries no scores");
    train_cmd->add_option("--out", train.out, "Model directory (default: NEURO_MODEL_DIR, else ./models)");
    train.pipe.attach(*train_cmd);

    predict_args predict;
    CLI::App *predict_cmd = app.add_subcommand("predict", "Classify one recording");
    predict_cmd->add_option("--model", predict.model, "Model id (default: best stored model)");
    predict_cmd->add_option("--model-dir", predict.model_dir, "Model directory (default: NEURO_MODEL_DIR, else ./models)");
    predict_cmd->add_option("--audio", predict.audio, "WAV file")->required()->check(CLI::ExistingFile);
    predict.pipe.attach(*predict_cmd);

    serve_args serve;
    CLI::App *serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
    serve_cmd->add_option("--config", serve.config_file, "key=value settings file (NEURO_* keys)")->check(CLI::ExistingFile);
    serve_cmd->add_option("--port", serve.port, "Override NEURO_PORT")->check(CLI::Range(0, 65535));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    try {
        if (synth_cmd->parsed()) {
            return run_synth(synth);
        }
        if (eval_cmd->parsed()) {
            return run_eval(eval);
        }
        if (train_cmd->parsed()) {
            return run_train(train);
        }
        if (predict_cmd->parsed()) {
            return run_predict(predict);
        }
        if (serve_cmd->parsed()) {
            return run_serve(serve);
        }
    } catch (const usage_error &e) {
        std::cerr << "neuro: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception &e) {
        std::cerr << "neuro: " << e.what() << "\n";
        return exit_runtime;
    }
    return exit_usage;
}
