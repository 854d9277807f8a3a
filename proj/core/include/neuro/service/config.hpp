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

#ifndef NEURO_SERVICE_CONFIG_HPP_
#define NEURO_SERVICE_CONFIG_HPP_

#include "neuro/pipeline.hpp"

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace neuro::service {

struct service_config {
    std::string host{ "0.0.0.0" };
    int port{ 8080 };
    std::filesystem::path model_dir{ "models" };
    std::filesystem::path log_path{ "predictions.jsonl" };
    pipeline::backend_config backends;
    /// Keep uploads in retained_audio_dir instead of discarding them.
    bool retain_audio{ false };
    std::filesystem::path retained_audio_dir{ "retained_audio" };
    std::size_t max_upload_bytes{ 50U * 1024U * 1024U };
    /// Invoked as `<command> <input> <output.wav>` for non-WAV uploads.
    std::optional<std::string> transcoder_command;
    std::optional<std::filesystem::path> static_dir;
    std::size_t worker_threads{ 8 };
};

using env_lookup = std::function<std::optional<std::string>(std::string_view)>;

/// Reads the process environment.
[[nodiscard]] env_lookup process_env();

/// Applies one NEURO_* setting; throws invalid_argument for unknown keys
/// or unparsable values.
void apply_setting(service_config &config, std::string_view key, std::string_view value);

/**
 * Defaults, then `key=value` lines from `file` (blank lines and '#'
 * comments skipped), then NEURO_* environment variables.
 */
[[nodiscard]] service_config load_config(const std::optional<std::filesystem::path> &file, const env_lookup &env = process_env());

}  // namespace neuro::service

#endif  // NEURO_SERVICE_CONFIG_HPP_
