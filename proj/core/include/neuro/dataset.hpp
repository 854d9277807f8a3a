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

#ifndef NEURO_DATASET_HPP_
#define NEURO_DATASET_HPP_

#include "neuro/classifiers/types.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace neuro::dataset {

using classifiers::label;

/// Paths are kept exactly as written; resolve them with manifest::resolve.
struct manifest_entry {
    std::string sample_id;
    std::string audio_path;
    classifiers::label label{ classifiers::label::hc };
    std::optional<int> age_years;
    std::optional<std::string> transcript_path;

    friend bool operator==(const manifest_entry &, const manifest_entry &) = default;
};

inline constexpr std::string_view manifest_header = "sample_id,audio_path,label,age_years,transcript_path";
inline constexpr int min_age_years = 3;
inline constexpr int max_age_years = 13;

struct manifest {
    /// Directory that relative paths are interpreted against.
    std::filesystem::path base_dir;
    std::vector<manifest_entry> entries;

    [[nodiscard]] std::filesystem::path resolve(std::string_view path) const;
    [[nodiscard]] std::vector<label> labels() const;
};

/// Throws manifest_parse_error (with line number), duplicate_id and, when
/// check_audio is set, missing_audio.
[[nodiscard]] manifest parse_manifest(std::string_view csv_text, const std::filesystem::path &base_dir, bool check_audio = true);
[[nodiscard]] manifest load_manifest(const std::filesystem::path &path);
[[nodiscard]] std::string write_manifest(const std::vector<manifest_entry> &entries);

struct corpus_summary {
    std::size_t n_participants{ 0 };
    std::size_t n_pt{ 0 };
    std::size_t n_hc{ 0 };
    double total_minutes{ 0.0 };
    double pt_minutes{ 0.0 };
    double hc_minutes{ 0.0 };

    friend bool operator==(const corpus_summary &, const corpus_summary &) = default;
};

/// `durations_s` maps sample_id to clip length in seconds. Throws
/// missing_duration for any entry without one.
[[nodiscard]] corpus_summary summarize(const std::vector<manifest_entry> &entries, const std::map<std::string, double> &durations_s);

enum class synthetic_profile {
    separable,
    overlapped,
};

[[nodiscard]] std::string_view to_string(synthetic_profile profile) noexcept;
[[nodiscard]] synthetic_profile parse_profile(std::string_view name);

inline constexpr std::size_t min_synthetic_per_class = 5;

struct synthetic_corpus {
    std::filesystem::path manifest_path;
    manifest corpus;
    /// Training accuracy of a logistic-regression probe on pooled stub
    /// embeddings, also written to metadata.json.
    double linear_probe_accuracy{ 0.0 };
};

/**
 * Writes `<out>/manifest.csv`, `<out>/metadata.json`, and per-sample
 * `audio/<id>.wav` (16 kHz PCM16) and `text/<id>.txt`. Output is a pure
 * function of the arguments.
 *
 * Audio is a jittered tone with two harmonics and white noise; PT clips sit
 * `shift` standard deviations above HC in fundamental frequency. Sidecar
 * text mixes English and Hindi words with a class-shifted Hindi share and
 * speaking rate.
 */
synthetic_corpus generate_synthetic(std::size_t n_per_class, synthetic_profile profile, std::uint64_t seed, const std::filesystem::path &out_dir);

}  // namespace neuro::dataset

#endif  // NEURO_DATASET_HPP_
