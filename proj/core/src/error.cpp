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

#include "neuro/error.hpp"

namespace neuro {

std::string_view to_string(const error_code code) noexcept {
    switch (code) {
        case error_code::malformed_audio: return "MALFORMED_AUDIO";
        case error_code::unsupported_format: return "UNSUPPORTED_FORMAT";
        case error_code::invalid_rate: return "INVALID_RATE";
        case error_code::backend_failure: return "BACKEND_FAILURE";
        case error_code::backend_unavailable: return "BACKEND_UNAVAILABLE";
        case error_code::rate_mismatch: return "RATE_MISMATCH";
        case error_code::clip_too_short: return "CLIP_TOO_SHORT";
        case error_code::empty_frames: return "EMPTY_FRAMES";
        case error_code::degenerate_labels: return "DEGENERATE_LABELS";
        case error_code::non_finite_input: return "NON_FINITE_INPUT";
        case error_code::dimension_mismatch: return "DIMENSION_MISMATCH";
        case error_code::too_few_samples: return "TOO_FEW_SAMPLES";
        case error_code::length_mismatch: return "LENGTH_MISMATCH";
        case error_code::empty_input: return "EMPTY_INPUT";
        case error_code::manifest_parse_error: return "MANIFEST_PARSE_ERROR";
        case error_code::missing_audio: return "MISSING_AUDIO";
        case error_code::duplicate_id: return "DUPLICATE_ID";
        case error_code::missing_duration: return "MISSING_DURATION";
        case error_code::io_error: return "IO_ERROR";
        case error_code::unknown_model: return "UNKNOWN_MODEL";
        case error_code::invalid_argument: return "INVALID_ARGUMENT";
        case error_code::corrupt_artifact: return "CORRUPT_ARTIFACT";
    }
    return "UNKNOWN";
}

error::error(const error_code code, const std::string &message) :
    std::runtime_error{ message },
    code_{ code } {}

}  // namespace neuro
