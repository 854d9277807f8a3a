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

#include "neuro/service/config.hpp"

#include "neuro/byte_io.hpp"
#include "neuro/error.hpp"

#include <fmt/format.h>

#include <array>
#include <charconv>
#include <cstdlib>

namespace neuro::service {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || end != value.data() + value.size()) {
        throw error{ error_code::invalid_argument, fmt::format("{}: '{}' is not a valid number", key, value) };
    }
    return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "1" || value == "true" || value == "yes" || value == "on") {
        return true;
    }
    if (value == "0" || value == "false" || value == "no" || value == "off") {
        return false;
    }
    throw error{ error_code::invalid_argument, fmt::format("{}: '{}' is not a boolean", key, value) };
}

constexpr std::array known_keys = {
    "NEURO_HOST", "NEURO_PORT", "NEURO_MODEL_DIR", "NEURO_LOG_PATH", "NEURO_BACKENDS", "NEURO_RETAIN_AUDIO",
    "NEURO_RETAINED_AUDIO_DIR", "NEURO_MAX_UPLOAD_MB", "NEURO_TRANSCODER", "NEURO_STATIC_DIR", "NEURO_THREADS",
    "NEURO_STUB_SEED", "NEURO_WHISPER_CMD", "NEURO_WHISPER_MODEL", "NEURO_EMBED_CMD", "NEURO_EMBED_MODEL",
    "NEURO_EMBED_DIM", "NEURO_EMBED_CACHE", "NEURO_LEXICON",
};

}  // namespace

env_lookup process_env() {
    return [](std::string_view key) -> std::optional<std::string> {
        const char *v = std::getenv(std::string{ key }.c_str());
        return v == nullptr ? std::nullopt : std::optional<std::string>{ v };
    };
}

void apply_setting(service_config &c, std::string_view key, std::string_view value) {
    if (key == "NEURO_HOST") {
        c.host = value;
    } else if (key == "NEURO_PORT") {
        c.port = parse_number<int>(key, value);
        if (c.port < 0 || c.port > 65535) {
            throw error{ error_code::invalid_argument, fmt::format("NEURO_PORT {} out of range", c.port) };
        }
    } else if (key == "NEURO_MODEL_DIR") {
        c.model_dir = value;
    } else if (key == "NEURO_LOG_PATH") {
        c.log_path = value;
    } else if (key == "NEURO_BACKENDS") {
        c.backends.mode = pipeline::parse_backend_mode(value);
    } else if (key == "NEURO_RETAIN_AUDIO") {
        c.retain_audio = parse_bool(key, value);
    } else if (key == "NEURO_RETAINED_AUDIO_DIR") {
        c.retained_audio_dir = value;
    } else if (key == "NEURO_MAX_UPLOAD_MB") {
        c.max_upload_bytes = parse_number<std::size_t>(key, value) * 1024U * 1024U;
    } else if (key == "NEURO_TRANSCODER") {
        c.transcoder_command = value.empty() ? std::nullopt : std::optional<std::string>{ value };
    } else if (key == "NEURO_STATIC_DIR") {
        c.static_dir = value.empty() ? std::nullopt : std::optional<std::filesystem::path>{ value };
    } else if (key == "NEURO_THREADS") {
        c.worker_threads = std::max<std::size_t>(1, parse_number<std::size_t>(key, value));
    } else if (key == "NEURO_STUB_SEED") {
        c.backends.stub_seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "NEURO_WHISPER_CMD") {
        c.backends.transcriber_command = value;
    } else if (key == "NEURO_WHISPER_MODEL") {
        c.backends.transcriber_model = value;
    } else if (key == "NEURO_EMBED_CMD") {
        c.backends.embedder_command = value;
    } else if (key == "NEURO_EMBED_MODEL") {
        c.backends.embedder_model = value;
    } else if (key == "NEURO_EMBED_DIM") {
        c.backends.embedder_dim = parse_number<std::size_t>(key, value);
    } else if (key == "NEURO_EMBED_CACHE") {
        c.backends.embedding_cache_dir = value.empty() ? std::nullopt : std::optional<std::filesystem::path>{ value };
    } else if (key == "NEURO_LEXICON") {
        c.backends.lexicon_path = value.empty() ? std::nullopt : std::optional<std::filesystem::path>{ value };
    } else {
        throw error{ error_code::invalid_argument, fmt::format("unknown setting '{}'", key) };
    }
}

service_config load_config(const std::optional<std::filesystem::path> &file, const env_lookup &env) {
    service_config c;
    if (file) {
        const std::string text = read_text_file(*file);
        std::size_t line_no = 0;
        std::size_t start = 0;
        while (start <= text.size()) {
            const std::size_t end = text.find('\n', start);
            const std::string_view line = trim(std::string_view{ text }.substr(start, end == std::string::npos ? std::string::npos : end - start));
            ++line_no;
            if (!line.empty() && line.front() != '#') {
                const auto eq = line.find('=');
                if (eq == std::string_view::npos) {
                    throw error{ error_code::invalid_argument, fmt::format("{}:{}: expected key=value", file->string(), line_no) };
                }
                apply_setting(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
            }
            if (end == std::string::npos) {
                break;
            }
            start = end + 1;
        }
    }
    for (const char *key : known_keys) {
        if (const auto v = env(key)) {
            apply_setting(c, key, *v);
        }
    }
    return c;
}

}  // namespace neuro::service
