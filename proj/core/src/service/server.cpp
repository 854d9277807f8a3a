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

#include "neuro/service/server.hpp"

#include "neuro/audio.hpp"
#include "neuro/byte_io.hpp"
#include "neuro/error.hpp"
#include "neuro/process.hpp"
#include "neuro/service/model_store.hpp"
#include "neuro/service/prediction.hpp"

#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>

#include <charconv>
#include <chrono>

namespace neuro::service {

namespace {

using json = nlohmann::json;
constexpr std::size_t default_history_limit = 50;
constexpr std::size_t max_history_limit = 10000;

int http_status(error_code code) {
    switch (code) {
        case error_code::malformed_audio:
        case error_code::unsupported_format:
        case error_code::invalid_rate:
        case error_code::clip_too_short:
        case error_code::invalid_argument: return 400;
        case error_code::unknown_model: return 404;
        case error_code::backend_failure:
        case error_code::backend_unavailable: return 503;
        default: return 500;
    }
}

void send_error(httplib::Response &res, int status, std::string_view code, std::string_view message) {
    res.status = status;
    res.set_content(json{ { "error", code }, { "message", message } }.dump(), "application/json");
}

std::string default_code(int status) {
    switch (status) {
        case 400: return "BAD_REQUEST";
        case 404: return "NOT_FOUND";
        case 413: return "PAYLOAD_TOO_LARGE";
        default: return "HTTP_" + std::to_string(status);
    }
}

std::string backend_state(bool stub, bool ready) {
    if (stub) {
        return "stub";
    }
    return ready ? "ready" : "unavailable";
}

}  // namespace

struct server::impl {
    service_config config;
    model_store store;
    prediction_log log;
    pipeline::backends backends;
    httplib::Server http;
    bool transcoder_available{ false };

    explicit impl(service_config c) :
        config{ std::move(c) },
        store{ config.model_dir },
        log{ config.log_path },
        backends{ pipeline::make_backends(config.backends) } {
        transcoder_available = config.transcoder_command && find_executable(*config.transcoder_command).has_value();
        const std::size_t threads = config.worker_threads;
        http.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
        http.set_payload_max_length(config.max_upload_bytes);
        http.set_default_headers({ { "Access-Control-Allow-Origin", "*" } });
        http.set_error_handler([](const httplib::Request &, httplib::Response &res) {
            if (res.body.empty()) {
                send_error(res, res.status, default_code(res.status), httplib::status_message(res.status));
            }
        });
        http.set_exception_handler([](const httplib::Request &, httplib::Response &res, const std::exception_ptr &ep) {
            try {
                std::rethrow_exception(ep);
            } catch (const error &e) {
                send_error(res, http_status(e.code()), e.code_name(), e.what());
            } catch (const std::exception &e) {
                send_error(res, 500, "INTERNAL", e.what());
            }
        });
        http.Options(R"(/api/.*)", [](const httplib::Request &, httplib::Response &res) {
            res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
            res.set_header("Access-Control-Allow-Headers", "Content-Type");
            res.status = 204;
        });
        http.Post("/api/predict", [this](const httplib::Request &req, httplib::Response &res) { predict(req, res); });
        http.Get("/api/models", [this](const httplib::Request &, httplib::Response &res) { models(res); });
        http.Get("/api/predictions", [this](const httplib::Request &req, httplib::Response &res) { predictions(req, res); });
        http.Get("/api/health", [this](const httplib::Request &, httplib::Response &res) { health(res); });
        if (config.static_dir && !http.set_mount_point("/", config.static_dir->string())) {
            throw error{ error_code::io_error, fmt::format("static directory {} does not exist", config.static_dir->string()) };
        }
    }

    std::vector<std::byte> transcode(const std::vector<std::byte> &upload) const {
        const auto in = unique_temp_path("neuro-upload-", ".bin");
        const auto out = unique_temp_path("neuro-transcoded-", ".wav");
        write_file_bytes(in, upload);
        const process_result r = run_process({ *config.transcoder_command, in.string(), out.string() });
        std::error_code ec;
        std::filesystem::remove(in, ec);
        if (r.exit_code != 0) {
            std::filesystem::remove(out, ec);
            throw error{ error_code::unsupported_format, fmt::format("transcoder could not convert the upload (exit {})", r.exit_code) };
        }
        std::vector<std::byte> wav = read_file_bytes(out);
        std::filesystem::remove(out, ec);
        return wav;
    }

    void predict(const httplib::Request &req, httplib::Response &res) {
        const auto started = std::chrono::steady_clock::now();
        if (!req.has_file("audio")) {
            send_error(res, 400, "MISSING_AUDIO", "multipart field 'audio' is required");
            return;
        }
        const httplib::MultipartFormData upload = req.get_file_value("audio");
        std::string model_id;
        if (req.has_file("model_id")) {
            model_id = req.get_file_value("model_id").content;
        } else if (req.has_param("model_id")) {
            model_id = req.get_param_value("model_id");
        }
        if (model_id.empty()) {
            const auto best = store.default_model_id();
            if (!best) {
                send_error(res, 503, "NO_MODEL", "the model store is empty; train a model first");
                return;
            }
            model_id = *best;
        }
        const auto model = store.get(model_id);

        std::vector<std::byte> bytes(upload.content.size());
        std::memcpy(bytes.data(), upload.content.data(), bytes.size());
        if (transcoder_available && audio::looks_like_other_container(bytes)) {
            bytes = transcode(bytes);
        }
        const auto decode_start = std::chrono::steady_clock::now();
        audio::audio_clip clip = audio::load_for_pipeline(bytes);
        const double decode_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - decode_start).count();
        clip.source_id = upload.filename;

        prediction_result result = predict_clip(clip, *model, model_id, backends);
        result.timing.decode = decode_ms;
        result.timing.total = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
        if (config.retain_audio) {
            std::error_code ec;
            std::filesystem::create_directories(config.retained_audio_dir, ec);
            write_file_bytes(config.retained_audio_dir / (result.request_id + ".wav"), audio::encode_wav(clip));
        }
        const std::string line = to_json_line(result);
        log.append(line);
        res.set_content(line, "application/json");
    }

    void models(httplib::Response &res) const {
        json out = json::array();
        for (const model_summary &m : store.list()) {
            out.push_back({
                { "model_id", m.model_id },
                { "family", classifiers::to_string(m.family) },
                { "feature_kind", classifiers::to_string(m.features) },
                { "mean_accuracy", m.mean_accuracy ? json(*m.mean_accuracy) : json(nullptr) },
                { "mean_macro_f1", m.mean_macro_f1 ? json(*m.mean_macro_f1) : json(nullptr) },
                { "created_at", m.created_at },
            });
        }
        res.set_content(out.dump(), "application/json");
    }

    void predictions(const httplib::Request &req, httplib::Response &res) const {
        std::size_t limit = default_history_limit;
        if (req.has_param("limit")) {
            const std::string v = req.get_param_value("limit");
            const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), limit);
            if (v.empty() || ec != std::errc{} || end != v.data() + v.size() || limit == 0 || limit > max_history_limit) {
                send_error(res, 400, "INVALID_LIMIT", fmt::format("limit must be an integer in 1..{}", max_history_limit));
                return;
            }
        }
        std::string body = "[";
        bool first = true;
        for (const std::string &line : log.recent(limit)) {
            if (!first) {
                body += ',';
            }
            body += line;
            first = false;
        }
        body += ']';
        res.set_content(body, "application/json");
    }

    void health(httplib::Response &res) const {
        const bool t_stub = backends.transcriber->kind() == "stub";
        const bool e_stub = backends.embedder->kind() == "stub";
        const std::string t_state = backend_state(t_stub, t_stub || backends.transcriber->ready());
        const std::string e_state = backend_state(e_stub, e_stub || backends.embedder->ready());
        std::size_t count = 0;
        try {
            count = store.size();
        } catch (const error &) {
            count = 0;
        }
        const bool degraded = t_state == "unavailable" || e_state == "unavailable";
        const json out = {
            { "status", degraded ? "degraded" : "ok" },
            { "backends", { { "transcription", t_state }, { "embedding", e_state } } },
            { "model_count", count },
            { "transcoder", transcoder_available },
        };
        res.set_content(out.dump(), "application/json");
    }
};

server::server(service_config config) :
    impl_{ std::make_unique<impl>(std::move(config)) } {}

server::~server() = default;

int server::bind() {
    int port = impl_->config.port;
    if (port == 0) {
        port = impl_->http.bind_to_any_port(impl_->config.host);
    } else if (!impl_->http.bind_to_port(impl_->config.host, port)) {
        port = -1;
    }
    if (port < 0) {
        throw error{ error_code::io_error, fmt::format("cannot bind {}:{}", impl_->config.host, impl_->config.port) };
    }
    return port;
}

void server::run() {
    impl_->http.listen_after_bind();
}

void server::stop() {
    impl_->http.stop();
}

const service_config &server::config() const noexcept {
    return impl_->config;
}

}  // namespace neuro::service
