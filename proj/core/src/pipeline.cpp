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

#include "neuro/pipeline.hpp"

#include "neuro/byte_io.hpp"
#include "neuro/classifiers/model.hpp"
#include "neuro/error.hpp"

#include <fmt/format.h>

#include <chrono>

namespace neuro::pipeline {

namespace {

using clock_type = std::chrono::steady_clock;

double elapsed_ms(clock_type::time_point since) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - since).count();
}

}  // namespace

backend_mode parse_backend_mode(std::string_view name) {
    if (name == "stub") {
        return backend_mode::stub;
    }
    if (name == "real") {
        return backend_mode::real;
    }
    throw error{ error_code::invalid_argument, fmt::format("backend mode must be 'stub' or 'real', got '{}'", name) };
}

backends make_backends(const backend_config &config) {
    backends b;
    if (config.mode == backend_mode::stub) {
        b.transcriber = std::make_shared<transcription::stub_transcription_backend>(config.stub_seed);
        b.embedder = std::make_shared<paralinguistic::stub_embedding_backend>(config.stub_seed);
    } else {
        b.transcriber = std::make_shared<transcription::command_transcription_backend>(config.transcriber_command, config.transcriber_model);
        b.embedder = std::make_shared<paralinguistic::command_embedding_backend>(config.embedder_command, config.embedder_model, config.embedder_dim);
    }
    if (config.embedding_cache_dir) {
        b.embedder = std::make_shared<paralinguistic::cached_embedding_backend>(b.embedder, *config.embedding_cache_dir);
    }
    if (config.lexicon_path) {
        b.words = std::make_shared<const linguistic::lexicon>(linguistic::lexicon::load(*config.lexicon_path));
    } else {
        b.words = std::shared_ptr<const linguistic::lexicon>(&linguistic::lexicon::builtin(), [](const linguistic::lexicon *) {});
    }
    return b;
}

clip_features extract_features(const audio::audio_clip &clip, const backends &b, const transcription::transcription_hints &hints) {
    clip_features out;
    auto t0 = clock_type::now();
    out.transcript = transcription::transcribe(clip, *b.transcriber, hints);
    out.timing.transcription_ms = elapsed_ms(t0);

    t0 = clock_type::now();
    out.linguistic = linguistic::extract_linguistic_features(out.transcript, *b.words);
    out.timing.linguistic_ms = elapsed_ms(t0);

    t0 = clock_type::now();
    out.paralinguistic = paralinguistic::pool_embedding(paralinguistic::embed(clip, *b.embedder));
    out.timing.embedding_ms = elapsed_ms(t0);
    return out;
}

std::vector<double> feature_vector(const clip_features &features, classifiers::feature_kind kind) {
    switch (kind) {
        case classifiers::feature_kind::linguistic: {
            const auto a = features.linguistic.to_array();
            return { a.begin(), a.end() };
        }
        case classifiers::feature_kind::paralinguistic: return features.paralinguistic.values;
        case classifiers::feature_kind::fused: return classifiers::fuse_features(features.linguistic, features.paralinguistic);
    }
    return {};
}

std::size_t feature_dimension(classifiers::feature_kind kind, std::size_t embedding_dim) noexcept {
    switch (kind) {
        case classifiers::feature_kind::linguistic: return linguistic::linguistic_features::dimension;
        case classifiers::feature_kind::paralinguistic: return embedding_dim;
        case classifiers::feature_kind::fused: return linguistic::linguistic_features::dimension + embedding_dim;
    }
    return 0;
}

classifiers::feature_matrix corpus_features::matrix(classifiers::feature_kind kind) const {
    classifiers::feature_matrix x;
    for (std::size_t i = 0; i < sample_ids.size(); ++i) {
        switch (kind) {
            case classifiers::feature_kind::linguistic: x.push_row(linguistic[i].to_array()); break;
            case classifiers::feature_kind::paralinguistic: x.push_row(paralinguistic[i].values); break;
            case classifiers::feature_kind::fused: x.push_row(classifiers::fuse_features(linguistic[i], paralinguistic[i])); break;
        }
    }
    return x;
}

corpus_features extract_corpus(const dataset::manifest &m, const backends &b, const progress_callback &progress) {
    corpus_features out;
    const std::size_t total = m.entries.size();
    for (std::size_t i = 0; i < total; ++i) {
        const dataset::manifest_entry &e = m.entries[i];
        try {
            audio::audio_clip clip = audio::load_for_pipeline(read_file_bytes(m.resolve(e.audio_path)));
            clip.source_id = e.sample_id;
            transcription::transcription_hints hints;
            if (e.transcript_path) {
                hints.sidecar_text = transcription::load_sidecar(m.resolve(*e.transcript_path));
            }
            clip_features f = extract_features(clip, b, hints);
            out.sample_ids.push_back(e.sample_id);
            out.labels.push_back(e.label);
            out.linguistic.push_back(f.linguistic);
            out.paralinguistic.push_back(std::move(f.paralinguistic));
        } catch (const error &err) {
            throw error{ err.code(), fmt::format("sample '{}': {}", e.sample_id, err.what()) };
        }
        if (progress) {
            progress(i + 1, total);
        }
    }
    return out;
}

}  // namespace neuro::pipeline
