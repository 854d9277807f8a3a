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

#include "neuro/service/model_store.hpp"

#include "neuro/classifiers/artifact.hpp"
#include "neuro/error.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace neuro::service {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view artifact_extension = ".neuro";

bool valid_id(const std::string &id) {
    return !id.empty() && std::all_of(id.begin(), id.end(), [](char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); });
}

}  // namespace

model_store::model_store(fs::path dir) :
    dir_{ std::move(dir) } {}

std::vector<std::string> model_store::ids() const {
    std::vector<std::string> out;
    std::error_code ec;
    if (!fs::exists(dir_, ec)) {
        return out;
    }
    fs::directory_iterator it{ dir_, ec };
    if (ec) {
        throw error{ error_code::io_error, fmt::format("cannot read model store {}: {}", dir_.string(), ec.message()) };
    }
    for (const fs::directory_entry &e : it) {
        if (e.is_regular_file() && e.path().extension() == artifact_extension) {
            out.push_back(e.path().stem().string());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t model_store::size() const {
    return ids().size();
}

std::shared_ptr<const classifiers::trained_model> model_store::get(const std::string &model_id) const {
    {
        const std::lock_guard lock{ mutex_ };
        if (const auto it = cache_.find(model_id); it != cache_.end()) {
            return it->second;
        }
    }
    const fs::path file = dir_ / (model_id + std::string{ artifact_extension });
    std::error_code ec;
    if (!valid_id(model_id) || !fs::is_regular_file(file, ec)) {
        throw error{ error_code::unknown_model, fmt::format("unknown model '{}'", model_id) };
    }
    auto model = std::make_shared<const classifiers::trained_model>(classifiers::load_model(file));
    const std::lock_guard lock{ mutex_ };
    return cache_.emplace(model_id, std::move(model)).first->second;
}

std::vector<model_summary> model_store::list() const {
    std::vector<model_summary> out;
    for (const std::string &id : ids()) {
        const auto m = get(id);
        model_summary s;
        s.model_id = id;
        s.family = m->spec.family;
        s.features = m->spec.features;
        if (m->evaluation) {
            s.mean_accuracy = m->evaluation->mean_accuracy;
            s.mean_macro_f1 = m->evaluation->mean_macro_f1;
        }
        s.created_at = m->created_at;
        out.push_back(std::move(s));
    }
    std::stable_sort(out.begin(), out.end(), [](const model_summary &a, const model_summary &b) {
        return a.created_at > b.created_at;
    });
    return out;
}

std::optional<std::string> model_store::default_model_id() const {
    const std::vector<model_summary> models = list();
    const model_summary *best = nullptr;
    for (const model_summary &m : models) {
        const double score = m.mean_macro_f1.value_or(-1.0);
        if (best == nullptr || score > best->mean_macro_f1.value_or(-1.0)) {
            best = &m;
        }
    }
    return best == nullptr ? std::nullopt : std::optional{ best->model_id };
}

std::string model_store::add(const classifiers::trained_model &model) {
    return classifiers::save_model(model, dir_);
}

}  // namespace neuro::service
