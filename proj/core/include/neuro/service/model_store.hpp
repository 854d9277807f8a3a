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

#ifndef NEURO_SERVICE_MODEL_STORE_HPP_
#define NEURO_SERVICE_MODEL_STORE_HPP_

#include "neuro/classifiers/model.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace neuro::service {

struct model_summary {
    std::string model_id;
    classifiers::model_family family{ classifiers::model_family::cnn };
    classifiers::feature_kind features{ classifiers::feature_kind::paralinguistic };
    std::optional<double> mean_accuracy;
    std::optional<double> mean_macro_f1;
    std::string created_at;
};

/// Directory of `<model_id>.neuro` artifacts. Artifacts are immutable, so
/// loaded models are cached by id.
class model_store {
  public:
    explicit model_store(std::filesystem::path dir);

    /// Newest first. Throws io_error when the directory cannot be read.
    [[nodiscard]] std::vector<model_summary> list() const;
    [[nodiscard]] std::size_t size() const;

    /// Throws unknown_model.
    [[nodiscard]] std::shared_ptr<const classifiers::trained_model> get(const std::string &model_id) const;

    /// Highest mean_macro_f1; models without scores rank last, ties go to
    /// the newest. Empty when the store is empty.
    [[nodiscard]] std::optional<std::string> default_model_id() const;

    std::string add(const classifiers::trained_model &model);

    [[nodiscard]] const std::filesystem::path &directory() const noexcept { return dir_; }

  private:
    std::filesystem::path dir_;
    mutable std::mutex mutex_;
    mutable std::map<std::string, std::shared_ptr<const classifiers::trained_model>> cache_;

    [[nodiscard]] std::vector<std::string> ids() const;
};

}  // namespace neuro::service

#endif  // NEURO_SERVICE_MODEL_STORE_HPP_
