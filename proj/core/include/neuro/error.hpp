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

#ifndef NEURO_ERROR_HPP_
#define NEURO_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace neuro {

/// Every failure raised by the library carries one of these codes. The
/// service maps them onto HTTP statuses, the CLI onto exit codes.
enum class error_code {
    malformed_audio,
    unsupported_format,
    invalid_rate,
    backend_failure,
    backend_unavailable,
    rate_mismatch,
    clip_too_short,
    empty_frames,
    degenerate_labels,
    non_finite_input,
    dimension_mismatch,
    too_few_samples,
    length_mismatch,
    empty_input,
    manifest_parse_error,
    missing_audio,
    duplicate_id,
    missing_duration,
    io_error,
    unknown_model,
    invalid_argument,
    corrupt_artifact,
};

/// Upper-snake machine-readable name, e.g. "MALFORMED_AUDIO".
[[nodiscard]] std::string_view to_string(error_code code) noexcept;

class error : public std::runtime_error {
  public:
    error(error_code code, const std::string &message);

    [[nodiscard]] error_code code() const noexcept { return code_; }
    [[nodiscard]] std::string_view code_name() const noexcept { return to_string(code_); }

  private:
    error_code code_;
};

}  // namespace neuro

#endif  // NEURO_ERROR_HPP_
