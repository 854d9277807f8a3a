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

#include "neuro/audio.hpp"
#include "neuro/byte_io.hpp"
#include "neuro/classifiers/model.hpp"
#include "neuro/error.hpp"
#include "neuro/pipeline.hpp"
#include "neuro/process.hpp"
#include "neuro/rng.hpp"
#include "neuro/service/config.hpp"
#include "neuro/service/model_store.hpp"
#include "neuro/service/prediction.hpp"
#include "neuro/service/server.hpp"

#include <gtest/gtest.h>
#include <httplib.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <future>
#include <map>
#include <numbers>
#include <set>
#include <thread>

namespace {

using namespace neuro;
using namespace neuro::service;
using classifiers::feature_kind;
using classifiers::model_family;
using nlohmann::json;
namespace fs = std::filesystem;

env_lookup fake_env(std::map<std::string, std::string> values) {
    return [values = std::move(values)](std::string_view key) -> std::optional<std::string> {
        const auto it = values.find(std::string{ key });
        return it == values.end() ? std::nullopt : std::optional{ it->second };
    };
}

class scratch_dir {
  public:
    scratch_dir() :
        path_{ unique_temp_path("neuro-service-", "") } {
        fs::create_directories(path_);
    }
    ~scratch_dir() { fs::remove_all(path_); }
    scratch_dir(const scratch_dir &) = delete;
    scratch_dir &operator=(const scratch_dir &) = delete;
    [[nodiscard]] const fs::path &path() const { return path_; }

  private:
    fs::path path_;
};

classifiers::trained_model small_model(model_family family, std::uint64_t seed, std::string created_at, std::optional<double> f1) {
    const std::size_t dim = pipeline::feature_dimension(feature_kind::paralinguistic, paralinguistic::stub_embedding_backend::default_dim);
    neuro::rng r{ seed };
    classifiers::feature_matrix x{ 0, dim };
    std::vector<classifiers::label> y;
    for (std::size_t i = 0; i < 20; ++i) {
        std::vector<double> row(dim);
        for (double &v : row) {
            v = r.normal(i % 2 == 0 ? -0.2 : 0.2, 0.3);
        }
        x.push_row(row);
        y.push_back(i % 2 == 0 ? classifiers::label::hc : classifiers::label::pt);
    }
    classifiers::trained_model m = classifiers::train(classifiers::model_spec::defaults(family, feature_kind::paralinguistic, dim, seed), x, y);
    m.created_at = std::move(created_at);
    if (f1) {
        m.evaluation = classifiers::cv_scores{ 5, seed, { 0.9, 0.9, 0.9, 0.9, 0.9 }, { *f1, *f1, *f1, *f1, *f1 }, 0.9, *f1 };
    }
    return m;
}

std::string tone_wav(double seconds, double freq) {
    audio::audio_clip clip;
    const auto n = static_cast<std::size_t>(seconds * 16000);
    for (std::size_t i = 0; i < n; ++i) {
        clip.samples.push_back(static_cast<float>(0.4 * std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(i) / 16000.0)));
    }
    const auto bytes = audio::encode_wav(clip);
    return { reinterpret_cast<const char *>(bytes.data()), bytes.size() };
}

TEST(Config, DefaultsFileThenEnvironment) {
    scratch_dir dir;
    const fs::path file = dir.path() / "neuro.conf";
    write_text_file(file, "# service settings\nNEURO_PORT=9000\n\nNEURO_MODEL_DIR=/srv/models\nNEURO_MAX_UPLOAD_MB=2\n");
    const service_config c = load_config(file, fake_env({ { "NEURO_PORT", "9100" }, { "NEURO_BACKENDS", "stub" }, { "NEURO_RETAIN_AUDIO", "true" } }));
    EXPECT_EQ(c.port, 9100);
    EXPECT_EQ(c.model_dir, fs::path{ "/srv/models" });
    EXPECT_EQ(c.max_upload_bytes, 2U * 1024U * 1024U);
    EXPECT_TRUE(c.retain_audio);
    EXPECT_EQ(c.host, "0.0.0.0");
    EXPECT_EQ(c.backends.mode, pipeline::backend_mode::stub);

    const service_config d = load_config(std::nullopt, fake_env({}));
    EXPECT_EQ(d.port, 8080);
    EXPECT_EQ(d.max_upload_bytes, 50U * 1024U * 1024U);
}

TEST(Config, RejectsBadValues) {
    service_config c;
    EXPECT_THROW(apply_setting(c, "NEURO_PORT", "eighty"), error);
    EXPECT_THROW(apply_setting(c, "NEURO_PORT", "70000"), error);
    EXPECT_THROW(apply_setting(c, "NEURO_NOPE", "1"), error);
    EXPECT_THROW(apply_setting(c, "NEURO_BACKENDS", "fast"), error);
}

TEST(ModelStore, OrderingDefaultAndMetrics) {
    scratch_dir dir;
    model_store store{ dir.path() / "models" };
    EXPECT_EQ(store.size(), 0U);
    EXPECT_TRUE(store.list().empty());
    EXPECT_FALSE(store.default_model_id());

    const auto old_model = small_model(model_family::svm, 1, "2026-01-01T00:00:00.000Z", 0.95);
    const auto new_model = small_model(model_family::rf, 2, "2026-02-01T00:00:00.000Z", 0.80);
    const std::string old_id = store.add(old_model);
    const std::string new_id = store.add(new_model);
    const auto listed = store.list();
    ASSERT_EQ(listed.size(), 2U);
    EXPECT_EQ(listed[0].model_id, new_id);
    EXPECT_EQ(listed[1].model_id, old_id);
    EXPECT_EQ(listed[1].mean_macro_f1, old_model.evaluation->mean_macro_f1);
    EXPECT_EQ(listed[1].mean_accuracy, old_model.evaluation->mean_accuracy);
    EXPECT_EQ(listed[0].family, model_family::rf);
    EXPECT_EQ(store.default_model_id(), old_id);
    EXPECT_EQ(store.get(old_id)->metadata, old_model.metadata);
    try {
        (void)store.get("000000000000");
        FAIL();
    } catch (const error &e) {
        EXPECT_EQ(e.code(), error_code::unknown_model);
    }
}

TEST(PredictionLog, RecentIsNewestFirstAndByteExact) {
    scratch_dir dir;
    prediction_log log{ dir.path() / "log.jsonl" };
    EXPECT_TRUE(log.recent(10).empty());
    log.append(R"({"n":1})");
    log.append(R"({"n":2,"s":"é"})");
    log.append(R"({"n":3})");
    EXPECT_EQ(log.recent(2), (std::vector<std::string>{ R"({"n":3})", R"({"n":2,"s":"é"})" }));
    EXPECT_EQ(log.recent(10).size(), 3U);
    EXPECT_EQ(read_text_file(dir.path() / "log.jsonl"), "{\"n\":1}\n{\"n\":2,\"s\":\"é\"}\n{\"n\":3}\n");
}

TEST(Prediction, RequestIdsAreUniqueHex) {
    std::set<std::string> ids;
    for (int i = 0; i < 1000; ++i) {
        const std::string id = new_request_id();
        EXPECT_EQ(id.size(), 32U);
        EXPECT_EQ(id.find_first_not_of("0123456789abcdef"), std::string::npos);
        ids.insert(id);
    }
    EXPECT_EQ(ids.size(), 1000U);
}

class running_server {
  public:
    explicit running_server(service_config config) :
        srv_{ std::move(config) } {
        port_ = srv_.bind();
        thread_ = std::thread{ [this] { srv_.run(); } };
        client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
        client_->set_read_timeout(30, 0);
        for (int i = 0; i < 200 && !client_->Get("/api/health"); ++i) {
            std::this_thread::sleep_for(std::chrono::milliseconds(10));
        }
    }
    ~running_server() {
        srv_.stop();
        thread_.join();
    }
    running_server(const running_server &) = delete;
    running_server &operator=(const running_server &) = delete;

    httplib::Client &client() { return *client_; }
    [[nodiscard]] int port() const { return port_; }

    httplib::Result upload(const std::string &content, const std::string &model_id = {}) {
        httplib::MultipartFormDataItems items{ { "audio", content, "clip.wav", "audio/wav" } };
        if (!model_id.empty()) {
            items.push_back({ "model_id", model_id, "", "" });
        }
        return client_->Post("/api/predict", items);
    }

  private:
    server srv_;
    int port_{ 0 };
    std::thread thread_;
    std::unique_ptr<httplib::Client> client_;
};

class ServerTest : public ::testing::Test {
  protected:
    void SetUp() override {
        config.host = "127.0.0.1";
        config.port = 0;
        config.model_dir = dir.path() / "models";
        config.log_path = dir.path() / "predictions.jsonl";
        config.worker_threads = 4;
    }

    std::string add_model(model_family family, std::uint64_t seed, std::optional<double> f1 = 0.9) {
        model_store store{ config.model_dir };
        return store.add(small_model(family, seed, classifiers::utc_timestamp_now(), f1));
    }

    scratch_dir dir;
    service_config config;
};

TEST_F(ServerTest, EmptyStore) {
    running_server s{ config };
    auto models = s.client().Get("/api/models");
    ASSERT_TRUE(models);
    EXPECT_EQ(models->status, 200);
    EXPECT_EQ(models->body, "[]");
    auto history = s.client().Get("/api/predictions");
    ASSERT_TRUE(history);
    EXPECT_EQ(history->body, "[]");
    auto predict = s.upload(tone_wav(1.0, 300));
    ASSERT_TRUE(predict);
    EXPECT_EQ(predict->status, 503);
    EXPECT_EQ(json::parse(predict->body).at("error"), "NO_MODEL");
}

TEST_F(ServerTest, HealthWithStubs) {
    add_model(model_family::svm, 3);
    running_server s{ config };
    auto res = s.client().Get("/api/health");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    const json h = json::parse(res->body);
    EXPECT_EQ(h.at("status"), "ok");
    EXPECT_EQ(h.at("backends").at("transcription"), "stub");
    EXPECT_EQ(h.at("backends").at("embedding"), "stub");
    EXPECT_EQ(h.at("model_count"), 1);
}

TEST_F(ServerTest, HealthWithMissingRealBackends) {
    config.backends.mode = pipeline::backend_mode::real;
    config.backends.transcriber_command = "/nonexistent/whisper";
    config.backends.embedder_command = "/nonexistent/embed";
    running_server s{ config };
    auto res = s.client().Get("/api/health");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    const json h = json::parse(res->body);
    EXPECT_EQ(h.at("status"), "degraded");
    EXPECT_EQ(h.at("backends").at("transcription"), "unavailable");
    EXPECT_EQ(h.at("backends").at("embedding"), "unavailable");
}

TEST_F(ServerTest, UnavailableBackendIs503) {
    const std::string id = add_model(model_family::svm, 3);
    config.backends.mode = pipeline::backend_mode::real;
    config.backends.transcriber_command = "/nonexistent/whisper";
    config.backends.embedder_command = "/nonexistent/embed";
    running_server s{ config };
    auto res = s.upload(tone_wav(1.0, 300), id);
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 503);
    EXPECT_EQ(json::parse(res->body).at("error"), "BACKEND_UNAVAILABLE");
}

TEST_F(ServerTest, PredictRoundTrip) {
    const std::string id = add_model(model_family::cnn, 4);
    running_server s{ config };
    const std::string wav = tone_wav(2.0, 260);
    auto first = s.upload(wav);
    ASSERT_TRUE(first);
    ASSERT_EQ(first->status, 200) << first->body;
    auto second = s.upload(wav, id);
    ASSERT_TRUE(second);
    ASSERT_EQ(second->status, 200);

    const json a = json::parse(first->body);
    const json b = json::parse(second->body);
    EXPECT_EQ(a.at("model_id"), id);
    const double p = a.at("probability").get<double>();
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
    EXPECT_EQ(a.at("label"), p >= 0.5 ? "PT" : "HC");
    EXPECT_EQ(a.at("label"), b.at("label"));
    EXPECT_EQ(a.at("probability"), b.at("probability"));
    EXPECT_NE(a.at("request_id"), b.at("request_id"));
    EXPECT_EQ(a.at("feature_kind"), "PARALINGUISTIC");
    EXPECT_TRUE(a.at("linguistic_snapshot").contains("switch_count"));
    EXPECT_TRUE(a.at("timing_ms").contains("total"));

    const std::string log_text = read_text_file(config.log_path);
    ASSERT_FALSE(log_text.empty());
    const auto last_start = log_text.rfind('\n', log_text.size() - 2);
    EXPECT_EQ(log_text.substr(last_start + 1, log_text.size() - last_start - 2), second->body);

    auto history = s.client().Get("/api/predictions?limit=1");
    ASSERT_TRUE(history);
    EXPECT_EQ(history->body, "[" + second->body + "]");
}

TEST_F(ServerTest, RejectsTextUpload) {
    add_model(model_family::svm, 5);
    running_server s{ config };
    auto res = s.upload("this is not audio, just a note\n");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 400);
    const json e = json::parse(res->body);
    EXPECT_EQ(e.at("error"), "MALFORMED_AUDIO");
    EXPECT_TRUE(e.contains("message"));
    EXPECT_FALSE(fs::exists(config.log_path) && !read_text_file(config.log_path).empty());
}

TEST_F(ServerTest, MissingAudioField) {
    add_model(model_family::svm, 5);
    running_server s{ config };
    auto res = s.client().Post("/api/predict", httplib::MultipartFormDataItems{ { "file", "x", "x.wav", "audio/wav" } });
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 400);
    EXPECT_EQ(json::parse(res->body).at("error"), "MISSING_AUDIO");
}

TEST_F(ServerTest, UnknownModel) {
    add_model(model_family::svm, 6);
    running_server s{ config };
    auto res = s.upload(tone_wav(1.0, 300), "ffffffffffff");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 404);
    EXPECT_EQ(json::parse(res->body).at("error"), "UNKNOWN_MODEL");
}

TEST_F(ServerTest, OversizeUpload) {
    add_model(model_family::svm, 7);
    config.max_upload_bytes = 64 * 1024;
    running_server s{ config };
    auto res = s.upload(tone_wav(3.0, 300));
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 413);
}

TEST_F(ServerTest, ModelsListed) {
    const std::string a = add_model(model_family::svm, 8, 0.7);
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
    const std::string b = add_model(model_family::rf, 9, std::nullopt);
    running_server s{ config };
    auto res = s.client().Get("/api/models");
    ASSERT_TRUE(res);
    const json list = json::parse(res->body);
    ASSERT_EQ(list.size(), 2U);
    EXPECT_EQ(list[0].at("model_id"), b);
    EXPECT_TRUE(list[0].at("mean_macro_f1").is_null());
    EXPECT_EQ(list[1].at("model_id"), a);
    EXPECT_EQ(list[1].at("mean_macro_f1").get<double>(), 0.7);
    EXPECT_EQ(list[1].at("family"), "SVM");
}

TEST_F(ServerTest, PredictionHistoryLimits) {
    add_model(model_family::svm, 10);
    running_server s{ config };
    std::vector<std::string> bodies;
    for (int i = 0; i < 3; ++i) {
        auto res = s.upload(tone_wav(1.0, 200.0 + 50.0 * i));
        ASSERT_TRUE(res);
        ASSERT_EQ(res->status, 200);
        bodies.push_back(res->body);
    }
    auto two = s.client().Get("/api/predictions?limit=2");
    ASSERT_TRUE(two);
    EXPECT_EQ(two->body, "[" + bodies[2] + "," + bodies[1] + "]");
    for (const char *bad : { "0", "-1", "abc", "99999999" }) {
        auto res = s.client().Get(std::string{ "/api/predictions?limit=" } + bad);
        ASSERT_TRUE(res);
        EXPECT_EQ(res->status, 400) << bad;
        EXPECT_EQ(json::parse(res->body).at("error"), "INVALID_LIMIT");
    }
}

TEST_F(ServerTest, ConcurrentPredictionsAreConsistent) {
    add_model(model_family::svm, 11);
    running_server s{ config };
    const std::string wav = tone_wav(1.0, 310);
    const auto port_client = [&] {
        httplib::Client c{ "127.0.0.1", s.port() };
        c.set_read_timeout(30, 0);
        return c.Post("/api/predict", httplib::MultipartFormDataItems{ { "audio", wav, "clip.wav", "audio/wav" } });
    };
    std::vector<std::future<httplib::Result>> futures;
    for (int i = 0; i < 6; ++i) {
        futures.push_back(std::async(std::launch::async, port_client));
    }
    std::set<std::string> ids;
    std::set<double> probabilities;
    for (auto &f : futures) {
        auto res = f.get();
        ASSERT_TRUE(res);
        ASSERT_EQ(res->status, 200);
        const json j = json::parse(res->body);
        const double p = j.at("probability").get<double>();
        EXPECT_EQ(j.at("label"), p >= 0.5 ? "PT" : "HC");
        ids.insert(j.at("request_id").get<std::string>());
        probabilities.insert(p);
    }
    EXPECT_EQ(ids.size(), 6U);
    EXPECT_EQ(probabilities.size(), 1U);
    EXPECT_EQ(json::parse(s.client().Get("/api/predictions")->body).size(), 6U);
}

}  // namespace
