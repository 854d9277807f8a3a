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

#include "neuro/dataset.hpp"

#include "neuro/audio.hpp"
#include "neuro/byte_io.hpp"
#include "neuro/classifiers/standardizer.hpp"
#include "neuro/error.hpp"
#include "neuro/paralinguistic.hpp"
#include "neuro/rng.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>

namespace neuro::dataset {

namespace {

namespace fs = std::filesystem;
using classifiers::feature_matrix;

[[noreturn]] void parse_fail(std::size_t line, const std::string &reason) {
    throw error{ error_code::manifest_parse_error, fmt::format("manifest line {}: {}", line, reason) };
}

// RFC 4180 fields: commas split, double quotes group and "" escapes.
std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    fields.back() += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    if (quoted) {
        parse_fail(line_no, "unterminated quoted field");
    }
    return fields;
}

std::string csv_field(std::string_view value) {
    if (value.find_first_of(",\"\n\r") == std::string_view::npos) {
        return std::string{ value };
    }
    std::string out = "\"";
    for (const char c : value) {
        out += c;
        if (c == '"') {
            out += '"';
        }
    }
    return out + "\"";
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = text.find('\n', start);
        std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        lines.push_back(line);
        if (end == std::string_view::npos) {
            break;
        }
        start = end + 1;
    }
    return lines;
}

// ------------------------------------------------------------ synthesis

constexpr double base_f0_hz = 220.0;
constexpr double f0_sigma_hz = 20.0;
constexpr double base_hindi_share = 0.15;
constexpr double hindi_sigma = 0.06;
constexpr double base_rate_wps = 2.0;
constexpr double rate_sigma_wps = 0.15;

constexpr std::array english_words = {
    "the", "ball", "dog", "cat", "want", "play", "water", "red", "big", "car", "mom", "dad", "go", "look", "this",
    "that", "is", "my", "come", "here", "eat", "run", "house", "school", "book", "blue", "tree", "sun", "yes", "no",
};
constexpr std::array hindi_words = {
    "अभी", "पानी", "खाना", "माँ", "घर", "दूध", "नहीं", "हाँ", "चलो", "बहुत", "अच्छा", "खेलना", "देखो", "मेरा", "यह",
    "वह", "आओ", "जाना", "बड़ा", "लाल",
};

double shift_for(synthetic_profile profile) {
    return profile == synthetic_profile::separable ? 5.0 : 0.5;
}

std::vector<float> synth_audio(rng &gen, double f0, double duration_s) {
    const auto n = static_cast<std::size_t>(std::llround(duration_s * audio::pipeline_rate_hz));
    const double gain = gen.uniform(0.5, 0.8);
    const double phase = gen.uniform(0.0, 2.0 * std::numbers::pi);
    std::vector<float> samples(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / audio::pipeline_rate_hz;
        const double w = 2.0 * std::numbers::pi * f0 * t + phase;
        const double tone = 0.6 * std::sin(w) + 0.25 * std::sin(2.0 * w) + 0.1 * std::sin(3.0 * w);
        samples[i] = static_cast<float>(std::clamp(gain * tone + 0.02 * gen.normal(), -1.0, 1.0));
    }
    return samples;
}

std::string synth_text(rng &gen, double hindi_share, double rate_wps, double duration_s) {
    const auto words = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(rate_wps * duration_s)));
    std::string out;
    std::size_t sentence_len = 0;
    std::size_t sentence_target = 3 + gen.uniform_index(4);
    for (std::size_t i = 0; i < words; ++i) {
        if (!out.empty()) {
            out += ' ';
        }
        if (gen.uniform() < hindi_share) {
            out += hindi_words[gen.uniform_index(hindi_words.size())];
        } else {
            out += english_words[gen.uniform_index(english_words.size())];
        }
        if (++sentence_len == sentence_target || i + 1 == words) {
            out += '.';
            sentence_len = 0;
            sentence_target = 3 + gen.uniform_index(4);
        }
    }
    return out + "\n";
}

// Full-batch logistic regression on standardized inputs; returns training accuracy.
double linear_probe_accuracy(const feature_matrix &x, std::span<const double> y) {
    const feature_matrix z = classifiers::standardizer::fit(x).apply(x);
    const std::size_t n = z.rows();
    const std::size_t d = z.cols();
    std::vector<double> w(d, 0.0);
    double b = 0.0;
    constexpr double step = 0.5;
    constexpr double l2 = 1e-3;
    std::vector<double> gw(d);
    for (int iter = 0; iter < 500; ++iter) {
        std::fill(gw.begin(), gw.end(), 0.0);
        double gb = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = b;
            for (std::size_t j = 0; j < d; ++j) {
                s += w[j] * z(i, j);
            }
            const double err = 1.0 / (1.0 + std::exp(-s)) - y[i];
            for (std::size_t j = 0; j < d; ++j) {
                gw[j] += err * z(i, j);
            }
            gb += err;
        }
        for (std::size_t j = 0; j < d; ++j) {
            w[j] -= step * (gw[j] / static_cast<double>(n) + l2 * w[j]);
        }
        b -= step * gb / static_cast<double>(n);
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = b;
        for (std::size_t j = 0; j < d; ++j) {
            s += w[j] * z(i, j);
        }
        hits += static_cast<std::size_t>((s >= 0.0) == (y[i] > 0.5));
    }
    return static_cast<double>(hits) / static_cast<double>(n);
}

}  // namespace

fs::path manifest::resolve(std::string_view path) const {
    const fs::path p{ path };
    return p.is_absolute() ? p : base_dir / p;
}

std::vector<label> manifest::labels() const {
    std::vector<label> out;
    out.reserve(entries.size());
    for (const manifest_entry &e : entries) {
        out.push_back(e.label);
    }
    return out;
}

manifest parse_manifest(std::string_view csv_text, const fs::path &base_dir, bool check_audio) {
    if (csv_text.starts_with("\xEF\xBB\xBF")) {
        csv_text.remove_prefix(3);
    }
    const std::vector<std::string_view> lines = split_lines(csv_text);
    if (lines.empty() || lines.front() != manifest_header) {
        parse_fail(1, fmt::format("expected header '{}'", manifest_header));
    }
    manifest out;
    out.base_dir = base_dir;
    std::set<std::string> seen;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (lines[i].find_first_not_of(" \t") == std::string_view::npos) {
            continue;
        }
        const std::vector<std::string> f = split_csv_line(lines[i], line_no);
        if (f.size() != 5) {
            parse_fail(line_no, fmt::format("expected 5 fields, found {}", f.size()));
        }
        manifest_entry e;
        e.sample_id = f[0];
        if (e.sample_id.empty()) {
            parse_fail(line_no, "empty sample_id");
        }
        e.audio_path = f[1];
        if (e.audio_path.empty()) {
            parse_fail(line_no, "empty audio_path");
        }
        try {
            e.label = classifiers::parse_label(f[2]);
        } catch (const error &) {
            parse_fail(line_no, fmt::format("label must be PT or HC, got '{}'", f[2]));
        }
        if (!f[3].empty()) {
            int age = 0;
            const auto [end, ec] = std::from_chars(f[3].data(), f[3].data() + f[3].size(), age);
            if (ec != std::errc{} || end != f[3].data() + f[3].size()) {
                parse_fail(line_no, fmt::format("age_years '{}' is not an integer", f[3]));
            }
            if (age < min_age_years || age > max_age_years) {
                parse_fail(line_no, fmt::format("age_years {} outside {}..{}", age, min_age_years, max_age_years));
            }
            e.age_years = age;
        }
        if (!f[4].empty()) {
            e.transcript_path = f[4];
        }
        if (!seen.insert(e.sample_id).second) {
            throw error{ error_code::duplicate_id, fmt::format("duplicate sample_id '{}' on manifest line {}", e.sample_id, line_no) };
        }
        if (check_audio && !fs::is_regular_file(out.resolve(e.audio_path))) {
            throw error{ error_code::missing_audio, fmt::format("audio for '{}' not found: {}", e.sample_id, out.resolve(e.audio_path).string()) };
        }
        out.entries.push_back(std::move(e));
    }
    return out;
}

manifest load_manifest(const fs::path &path) {
    return parse_manifest(read_text_file(path), path.parent_path());
}

std::string write_manifest(const std::vector<manifest_entry> &entries) {
    std::string out{ manifest_header };
    out += '\n';
    for (const manifest_entry &e : entries) {
        out += fmt::format("{},{},{},{},{}\n", csv_field(e.sample_id), csv_field(e.audio_path), classifiers::to_string(e.label),
                           e.age_years ? std::to_string(*e.age_years) : std::string{}, csv_field(e.transcript_path.value_or("")));
    }
    return out;
}

corpus_summary summarize(const std::vector<manifest_entry> &entries, const std::map<std::string, double> &durations_s) {
    corpus_summary s;
    double pt_seconds = 0.0;
    double hc_seconds = 0.0;
    for (const manifest_entry &e : entries) {
        const auto it = durations_s.find(e.sample_id);
        if (it == durations_s.end()) {
            throw error{ error_code::missing_duration, fmt::format("no duration for sample '{}'", e.sample_id) };
        }
        if (e.label == label::pt) {
            ++s.n_pt;
            pt_seconds += it->second;
        } else {
            ++s.n_hc;
            hc_seconds += it->second;
        }
    }
    s.n_participants = s.n_pt + s.n_hc;
    s.pt_minutes = pt_seconds / 60.0;
    s.hc_minutes = hc_seconds / 60.0;
    s.total_minutes = (pt_seconds + hc_seconds) / 60.0;
    return s;
}

std::string_view to_string(synthetic_profile profile) noexcept {
    return profile == synthetic_profile::separable ? "separable" : "overlapped";
}

synthetic_profile parse_profile(std::string_view name) {
    if (name == "separable" || name == "SEPARABLE") {
        return synthetic_profile::separable;
    }
    if (name == "overlapped" || name == "OVERLAPPED") {
        return synthetic_profile::overlapped;
    }
    throw error{ error_code::invalid_argument, fmt::format("unknown profile '{}'", name) };
}

synthetic_corpus generate_synthetic(std::size_t n_per_class, synthetic_profile profile, std::uint64_t seed, const fs::path &out_dir) {
    if (n_per_class < min_synthetic_per_class) {
        throw error{ error_code::invalid_argument, fmt::format("n_per_class must be at least {}, got {}", min_synthetic_per_class, n_per_class) };
    }
    std::error_code ec;
    fs::create_directories(out_dir / "audio", ec);
    if (!ec) {
        fs::create_directories(out_dir / "text", ec);
    }
    if (ec) {
        throw error{ error_code::io_error, fmt::format("cannot create {}: {}", out_dir.string(), ec.message()) };
    }

    const double shift = shift_for(profile);
    paralinguistic::stub_embedding_backend embedder{ 0 };
    synthetic_corpus result;
    result.corpus.base_dir = out_dir;
    feature_matrix probe_x;
    std::vector<double> probe_y;

    for (const label cls : { label::hc, label::pt }) {
        const double offset = cls == label::pt ? shift : 0.0;
        for (std::size_t i = 0; i < n_per_class; ++i) {
            const std::string id = fmt::format("{}_{:03d}", cls == label::pt ? "pt" : "hc", i);
            rng gen{ hash_combine(hash_combine(seed, classifiers::encode(cls) > 0.5 ? 0x5054ULL : 0x4843ULL), i) };
            const double duration = gen.uniform(2.0, 4.0);
            const double f0 = base_f0_hz + offset * f0_sigma_hz + gen.normal(0.0, f0_sigma_hz);
            const double hindi_share = std::clamp(gen.normal(base_hindi_share + offset * hindi_sigma, hindi_sigma), 0.0, 1.0);
            const double rate = std::max(0.5, gen.normal(base_rate_wps + offset * rate_sigma_wps, rate_sigma_wps));

            audio::audio_clip clip;
            clip.samples = synth_audio(gen, f0, duration);
            clip.source_id = id;
            const std::vector<std::byte> wav = audio::encode_wav(clip);
            const std::string text = synth_text(gen, hindi_share, rate, duration);

            manifest_entry e;
            e.sample_id = id;
            e.audio_path = "audio/" + id + ".wav";
            e.label = cls;
            e.age_years = min_age_years + static_cast<int>(gen.uniform_index(max_age_years - min_age_years + 1));
            e.transcript_path = "text/" + id + ".txt";
            write_file_bytes(out_dir / e.audio_path, wav);
            write_text_file(out_dir / *e.transcript_path, text);
            result.corpus.entries.push_back(std::move(e));

            const audio::audio_clip decoded = audio::load_for_pipeline(wav);
            probe_x.push_row(paralinguistic::pool_embedding(paralinguistic::embed(decoded, embedder)).values);
            probe_y.push_back(classifiers::encode(cls));
        }
    }

    result.linear_probe_accuracy = linear_probe_accuracy(probe_x, probe_y);
    result.manifest_path = out_dir / "manifest.csv";
    write_text_file(result.manifest_path, write_manifest(result.corpus.entries));
    const nlohmann::json meta = {
        { "n_per_class", n_per_class },
        { "profile", to_string(profile) },
        { "seed", seed },
        { "sample_rate_hz", audio::pipeline_rate_hz },
        { "class_shift_sigma", shift },
        { "stub_embedding_seed", 0 },
        { "linear_probe_accuracy", result.linear_probe_accuracy },
    };
    write_text_file(out_dir / "metadata.json", meta.dump(2) + "\n");
    return result;
}

}  // namespace neuro::dataset
