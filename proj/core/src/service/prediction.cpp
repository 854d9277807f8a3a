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

#include "neuro/service/prediction.hpp"

#include "neuro/byte_io.hpp"
#include "neuro/error.hpp"
#include "neuro/rng.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <deque>
#include <fcntl.h>
#include <fstream>
#include <random>
#include <unistd.h>

namespace neuro::service {

namespace {

using clock_type = std::chrono::steady_clock;

std::uint64_t process_entropy() {
    static const std::uint64_t value = [] {
        std::random_device rd;
        return (static_cast<std::uint64_t>(rd()) << 32U) ^ rd() ^ static_cast<std::uint64_t>(::getpid());
    }();
    return value;
}

}  // namespace

std::string new_request_id() {
    static std::atomic<std::uint64_t> counter{ 0 };
    const std::uint64_t n = counter.fetch_add(1);
    const auto now = static_cast<std::uint64_t>(std::chrono::system_clock::now().time_since_epoch().count());
    const std::uint64_t hi = mix64(hash_combine(process_entropy(), now));
    const std::uint64_t lo = mix64(hash_combine(hi, n));
    return fmt::format("{:016x}{:016x}", hi, lo);
}

std::string to_json_line(const prediction_result &r) {
    nlohmann::ordered_json snapshot = nlohmann::ordered_json::object();
    const auto values = r.linguistic_snapshot.to_array();
    const auto &names = linguistic::linguistic_features::field_names();
    for (std::size_t i = 0; i < values.size(); ++i) {
        snapshot[std::string{ names[i] }] = values[i];
    }
    const nlohmann::ordered_json j = {
        { "request_id", r.request_id },
        { "label", classifiers::to_string(r.label) },
        { "probability", r.probability },
        { "model_id", r.model_id },
        { "feature_kind", classifiers::to_string(r.features) },
        { "linguistic_snapshot", snapshot },
        { "timing_ms",
          {
              { "decode", r.timing.decode },
              { "transcription", r.timing.transcription },
              { "linguistic", r.timing.linguistic },
              { "embedding", r.timing.embedding },
              { "classification", r.timing.classification },
              { "total", r.timing.total },
          } },
        { "created_at", r.created_at },
    };
    return j.dump();
}

prediction_result predict_clip(const audio::audio_clip &clip, const classifiers::trained_model &model, const std::string &model_id,
                               const pipeline::backends &backends) {
    prediction_result r;
    r.request_id = new_request_id();
    r.model_id = model_id;
    r.features = model.spec.features;
    const pipeline::clip_features f = pipeline::extract_features(clip, backends);
    r.linguistic_snapshot = f.linguistic;
    r.timing.transcription = f.timing.transcription_ms;
    r.timing.linguistic = f.timing.linguistic_ms;
    r.timing.embedding = f.timing.embedding_ms;

    const auto t0 = clock_type::now();
    r.probability = classifiers::predict_proba(model, pipeline::feature_vector(f, model.spec.features));
    r.label = classifiers::threshold(r.probability);
    r.timing.classification = std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
    r.timing.total = r.timing.transcription + r.timing.linguistic + r.timing.embedding + r.timing.classification;
    r.created_at = classifiers::utc_timestamp_now();
    return r;
}

prediction_log::prediction_log(std::filesystem::path path) :
    path_{ std::move(path) } {}

void prediction_log::append(const std::string &json_line) {
    const std::lock_guard lock{ mutex_ };
    if (path_.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path_.parent_path(), ec);
    }
    const int fd = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd < 0) {
        throw error{ error_code::io_error, fmt::format("cannot open prediction log {}: {}", path_.string(), std::strerror(errno)) };
    }
    const std::string line = json_line + "\n";
    std::size_t written = 0;
    while (written < line.size()) {
        const ssize_t n = ::write(fd, line.data() + written, line.size() - written);
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            const int err = errno;
            ::close(fd);
            throw error{ error_code::io_error, fmt::format("cannot write prediction log: {}", std::strerror(err)) };
        }
        written += static_cast<std::size_t>(n);
    }
    const int rc = ::fsync(fd);
    ::close(fd);
    if (rc != 0) {
        throw error{ error_code::io_error, fmt::format("fsync of prediction log failed: {}", std::strerror(errno)) };
    }
}

std::vector<std::string> prediction_log::recent(std::size_t limit) const {
    std::ifstream in{ path_ };
    std::deque<std::string> tail;
    if (!in) {
        return {};
    }
    std::string line;
    while (std::getline(in, line)) {
        // An unterminated last line is an append still in progress.
        if (line.empty() || in.eof()) {
            continue;
        }
        tail.push_back(std::move(line));
        if (tail.size() > limit) {
            tail.pop_front();
        }
    }
    return { tail.rbegin(), tail.rend() };
}

}  // namespace neuro::service
