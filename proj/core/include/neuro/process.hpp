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

#ifndef NEURO_PROCESS_HPP_
#define NEURO_PROCESS_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace neuro {

struct process_result {
    int exit_code{ -1 };
    std::string standard_output;
    std::string standard_error;
};

/// Runs argv[0] (looked up on PATH) with the given arguments and captures
/// both output streams. Throws error_code::backend_failure if it cannot be
/// started.
[[nodiscard]] process_result run_process(const std::vector<std::string> &argv);

/// Resolves a command name or path to an executable file, if any.
[[nodiscard]] std::optional<std::filesystem::path> find_executable(const std::string &command);

/// Creates a uniquely named file path in the system temp directory.
[[nodiscard]] std::filesystem::path unique_temp_path(const std::string &prefix, const std::string &extension);

}  // namespace neuro

#endif  // NEURO_PROCESS_HPP_
