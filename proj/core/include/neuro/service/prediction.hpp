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

#ifndef NEURO_SERVICE_PREDICTION_HPP_
#define NEURO_SERVICE_PREDICTION_HPP_

#include "neuro/audio.hpp"
#include "neuro/classifiers/model.hpp"
#include "neuro/linguistic.hpp"
#include "neuro/pipeline.hpp"

#include <cstddef>
#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

namespace neuro::service {

struct timing_ms {
    double decode{ 0.0 };
    double transcription{ 0.0 };
    double linguistic{ 0.0 };
    double embedding{ 0.0 };
    double classification{ 0.0 };
    double total{ 0.0 };
};

struct prediction_result {
    std::string request_id;
    classifiers::label label{ classifiers::label::hc };
    double probability{ 0.0 };
    std::string model_id;
    classifiers::feature_kind features{ classifiers::feature_kind::paralinguistic };
    linguistic::linguistic_features linguistic_snapshot;
    timing_ms timing;
    std::string created_at;
};

/// 32 hex characters, unique per process run and across runs.
[[nodiscard]] std::string new_request_id();

/// Compact single-line JSON; the same text is logged and returned.
[[nodiscard]] std::string to_json_line(const prediction_result &result);

/// Runs the pipeline on a pipeline-rate clip and classifies it.
[[nodiscard]] prediction_result predict_clip(const audio::audio_clip &clip, const classifiers::trained_model &model,
                                             const std::string &model_id, const pipeline::backends &backends);

/// Append-only JSON-lines log. Each append is flushed to disk before it
/// returns.
class prediction_log {
  public:
    explicit prediction_log(std::filesystem::path path);

    /// Throws io_error.
    void append(const std::string &json_line);

    /// Most recent `limit` lines, newest first, byte-identical to the file.
    [[nodiscard]] std::vector<std::string> recent(std::size_t limit) const;

    [[nodiscard]] const std::filesystem::path &path() const noexcept { return path_; }

  private:
    std::filesystem::path path_;
    mutable std::mutex mutex_;
};

}  // namespace neuro::service

#endif  // NEURO_SERVICE_PREDICTION_HPP_
