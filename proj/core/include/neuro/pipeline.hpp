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

#ifndef NEURO_PIPELINE_HPP_
#define NEURO_PIPELINE_HPP_

#include "neuro/audio.hpp"
#include "neuro/classifiers/types.hpp"
#include "neuro/dataset.hpp"
#include "neuro/linguistic.hpp"
#include "neuro/paralinguistic.hpp"
#include "neuro/transcription.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace neuro::pipeline {

enum class backend_mode {
    stub,
    real,
};

[[nodiscard]] backend_mode parse_backend_mode(std::string_view name);

struct backend_config {
    backend_mode mode{ backend_mode::stub };
    std::uint64_t stub_seed{ 0 };
    std::string transcriber_command{ "neuro-whisper" };
    std::string transcriber_model{ "whisper-small" };
    std::string embedder_command{ "neuro-trillsson" };
    std::string embedder_model{ "trillsson3" };
    std::size_t embedder_dim{ paralinguistic::real_model_embedding_dim };
    std::optional<std::filesystem::path> embedding_cache_dir;
    /// Replaces the built-in romanized Hindi word list when set.
    std::optional<std::filesystem::path> lexicon_path;
};

struct backends {
    std::shared_ptr<transcription::transcription_backend> transcriber;
    std::shared_ptr<paralinguistic::embedding_backend> embedder;
    std::shared_ptr<const linguistic::lexicon> words;
};

[[nodiscard]] backends make_backends(const backend_config &config);

struct stage_timing {
    double transcription_ms{ 0.0 };
    double linguistic_ms{ 0.0 };
    double embedding_ms{ 0.0 };
};

struct clip_features {
    transcription::timed_transcript transcript;
    linguistic::linguistic_features linguistic;
    paralinguistic::paralinguistic_embedding paralinguistic;
    stage_timing timing;
};

/// Both branches on a pipeline-rate clip.
[[nodiscard]] clip_features extract_features(const audio::audio_clip &clip, const backends &b,
                                             const transcription::transcription_hints &hints = {});

/// Classifier input for the given feature kind.
[[nodiscard]] std::vector<double> feature_vector(const clip_features &features, classifiers::feature_kind kind);
[[nodiscard]] std::size_t feature_dimension(classifiers::feature_kind kind, std::size_t embedding_dim) noexcept;

struct corpus_features {
    std::vector<std::string> sample_ids;
    std::vector<classifiers::label> labels;
    std::vector<linguistic::linguistic_features> linguistic;
    std::vector<paralinguistic::paralinguistic_embedding> paralinguistic;

    [[nodiscard]] classifiers::feature_matrix matrix(classifiers::feature_kind kind) const;
};

using progress_callback = std::function<void(std::size_t done, std::size_t total)>;

/// Reads every clip and sidecar named by the manifest and runs both branches.
[[nodiscard]] corpus_features extract_corpus(const dataset::manifest &m, const backends &b, const progress_callback &progress = {});

}  // namespace neuro::pipeline

#endif  // NEURO_PIPELINE_HPP_
