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

#ifndef NEURO_CLASSIFIERS_ARTIFACT_HPP_
#define NEURO_CLASSIFIERS_ARTIFACT_HPP_

#include "neuro/classifiers/model.hpp"

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace neuro::classifiers {

inline constexpr std::string_view artifact_format = "neuro-model/1";

/**
 * Layout:
 *   "neuro-model/1\n"
 *   u64 LE length, JSON header (spec, train_metadata, created_at, evaluation)
 *   u64 LE length, binary estimator payload
 */
[[nodiscard]] std::vector<std::byte> serialize_model(const trained_model &model);
[[nodiscard]] trained_model parse_model(std::span<const std::byte> bytes);

/// First 12 hex characters of a 64-bit content hash.
[[nodiscard]] std::string content_model_id(std::span<const std::byte> artifact_bytes);

/// Writes `<dir>/<model_id>.neuro` and returns the id.
std::string save_model(const trained_model &model, const std::filesystem::path &dir);
[[nodiscard]] trained_model load_model(const std::filesystem::path &file);

}  // namespace neuro::classifiers

#endif  // NEURO_CLASSIFIERS_ARTIFACT_HPP_
