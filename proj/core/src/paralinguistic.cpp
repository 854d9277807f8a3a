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

#include "neuro/paralinguistic.hpp"

#include "neuro/byte_io.hpp"
#include "neuro/dsp.hpp"
#include "neuro/error.hpp"
#include "neuro/process.hpp"
#include "neuro/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace neuro::paralinguistic {

namespace {

constexpr std::size_t band_count = 18;
constexpr double band_low_hz = 50.0;
constexpr double band_high_hz = 8000.0;
constexpr double projection_gain = 1.5;
constexpr double jitter_weight = 0.1;

// Maps a positive ratio onto roughly [-1, 1]: 1 -> 1, 1e-3 -> 0, 1e-6 -> -1.
double log_unit(double ratio) noexcept {
    return (std::log10(ratio + 1e-6) + 3.0) / 3.0;
}

std::uint64_t string_hash(std::string_view s) noexcept {
    return hash_bytes(as_byte_span(s));
}

}  // namespace

stub_embedding_backend::stub_embedding_backend(std::uint64_t seed, std::size_t embedding_dim) :
    seed_{ seed },
    dim_{ embedding_dim } {
    if (dim_ == 0) {
        throw error{ error_code::invalid_argument, "embedding dimension must be positive" };
    }
    rng gen{ hash_combine(seed, 0x7E11550AULL) };
    projection_.resize(dim_ * descriptor_count);
    const double scale = projection_gain / std::sqrt(static_cast<double>(descriptor_count));
    for (double &w : projection_) {
        w = gen.normal() * scale;
    }
    bias_.resize(dim_);
    for (double &b : bias_) {
        b = gen.normal() * 0.1;
    }
}

std::string stub_embedding_backend::identity() const {
    return fmt::format("stub/seed={}/dim={}", seed_, dim_);
}

std::vector<double> stub_embedding_backend::describe_frame(std::span<const float> frame, std::uint32_t sample_rate_hz) {
    std::vector<double> d(descriptor_count, 0.0);
    if (frame.empty()) {
        return d;
    }
    const std::size_t fft_size = std::max<std::size_t>(256, dsp::next_power_of_two(frame.size()));
    const std::vector<double> power = dsp::power_spectrum(frame, fft_size);
    const double bin_hz = static_cast<double>(sample_rate_hz) / static_cast<double>(fft_size);

    std::vector<double> bands(band_count, 0.0);
    double total = 0.0;
    for (std::size_t k = 1; k < power.size(); ++k) {
        total += power[k];
        const double f = static_cast<double>(k) * bin_hz;
        if (f < band_low_hz || f >= band_high_hz) {
            continue;
        }
        const auto b = static_cast<std::size_t>(std::log(f / band_low_hz) / std::log(band_high_hz / band_low_hz) * band_count);
        bands[std::min(b, band_count - 1)] += power[k];
    }
    for (std::size_t b = 0; b < band_count; ++b) {
        d[b] = total > 0.0 ? log_unit(bands[b] / total) : -1.0;
    }

    double energy = 0.0;
    std::size_t crossings = 0;
    for (std::size_t i = 0; i < frame.size(); ++i) {
        energy += static_cast<double>(frame[i]) * frame[i];
        if (i > 0 && ((frame[i] >= 0.0F) != (frame[i - 1] >= 0.0F))) {
            ++crossings;
        }
    }
    d[band_count] = log_unit(std::sqrt(energy / static_cast<double>(frame.size())));
    d[band_count + 1] = 2.0 * static_cast<double>(crossings) / static_cast<double>(frame.size());
    return d;
}

frame_embeddings stub_embedding_backend::run(const audio::audio_clip &clip) {
    const std::size_t hop = static_cast<std::size_t>(hop_s * clip.sample_rate_hz);
    const std::size_t n = clip.samples.size();
    const std::size_t frames = std::max<std::size_t>(1, hop == 0 ? 1 : n / hop);

    frame_embeddings out;
    out.frames = frames;
    out.embedding_dim = dim_;
    out.values.resize(frames * dim_);
    const std::span<const float> samples{ clip.samples };
    for (std::size_t t = 0; t < frames; ++t) {
        const std::size_t begin = frames == 1 ? 0 : t * hop;
        const std::size_t end = frames == 1 ? n : std::min(n, (t + 1) * hop);
        const std::span<const float> window = samples.subspan(begin, end - begin);
        const std::vector<double> d = describe_frame(window, clip.sample_rate_hz);
        const counter_stream jitter{ hash_bytes(std::as_bytes(window), seed_) };
        for (std::size_t i = 0; i < dim_; ++i) {
            double z = bias_[i];
            for (std::size_t j = 0; j < descriptor_count; ++j) {
                z += projection_[i * descriptor_count + j] * d[j];
            }
            const double v = (1.0 - jitter_weight) * std::tanh(z) + jitter_weight * jitter.symmetric(i);
            out.values[t * dim_ + i] = static_cast<float>(v);
        }
    }
    return out;
}

command_embedding_backend::command_embedding_backend(std::string command, std::string model_id, std::size_t embedding_dim) :
    command_{ std::move(command) },
    model_id_{ std::move(model_id) },
    dim_{ embedding_dim } {}

bool command_embedding_backend::ready() const {
    return !model_id_.empty() && find_executable(command_).has_value();
}

std::string command_embedding_backend::identity() const {
    return fmt::format("command/{}/model={}/dim={}", command_, model_id_, dim_);
}

frame_embeddings command_embedding_backend::run(const audio::audio_clip &clip) {
    if (!ready()) {
        throw error{ error_code::backend_unavailable, "embedding command '" + command_ + "' is not available" };
    }
    const std::lock_guard lock{ in_flight_ };
    const std::filesystem::path wav = unique_temp_path("neuro-emb", ".wav");
    const std::filesystem::path out = unique_temp_path("neuro-emb", ".emb");
    const auto cleanup = [&] {
        std::error_code ec;
        std::filesystem::remove(wav, ec);
        std::filesystem::remove(out, ec);
    };
    try {
        write_file_bytes(wav, audio::encode_wav(clip));
        const process_result result = run_process({ command_, "--model", model_id_, wav.string(), out.string() });
        if (result.exit_code != 0) {
            throw error{ error_code::backend_failure, fmt::format("embedding command exited with {}: {}", result.exit_code, result.standard_error.substr(0, 512)) };
        }
        frame_embeddings emb = parse_neuemb(read_file_bytes(out));
        cleanup();
        return emb;
    } catch (...) {
        cleanup();
        throw;
    }
}

cached_embedding_backend::cached_embedding_backend(std::shared_ptr<embedding_backend> inner, std::filesystem::path cache_dir) :
    inner_{ std::move(inner) },
    cache_dir_{ std::move(cache_dir) } {
    std::filesystem::create_directories(cache_dir_);
}

std::filesystem::path cached_embedding_backend::cache_path(const audio::audio_clip &clip) const {
    const std::uint64_t key = hash_bytes(std::as_bytes(std::span{ clip.samples }), hash_combine(string_hash(inner_->identity()), clip.sample_rate_hz));
    return cache_dir_ / fmt::format("{:016x}.emb", key);
}

frame_embeddings cached_embedding_backend::run(const audio::audio_clip &clip) {
    const std::filesystem::path path = cache_path(clip);
    if (std::filesystem::exists(path)) {
        return parse_neuemb(read_file_bytes(path));
    }
    frame_embeddings emb = inner_->run(clip);
    // Write to a sibling temp name first so concurrent readers never see a partial file.
    const std::filesystem::path tmp = path.string() + "." + unique_temp_path("part", "").filename().string();
    write_file_bytes(tmp, serialize_neuemb(emb));
    std::filesystem::rename(tmp, path);
    return emb;
}

frame_embeddings embed(const audio::audio_clip &clip, embedding_backend &backend) {
    if (clip.sample_rate_hz != audio::pipeline_rate_hz) {
        throw error{ error_code::rate_mismatch, fmt::format("embedding expects {} Hz audio, got {} Hz", audio::pipeline_rate_hz, clip.sample_rate_hz) };
    }
    if (clip.duration_s() < backend.min_window_s()) {
        throw error{ error_code::clip_too_short, fmt::format("clip lasts {:.3f} s, backend needs at least {:.3f} s", clip.duration_s(), backend.min_window_s()) };
    }
    frame_embeddings emb;
    try {
        emb = backend.run(clip);
    } catch (const error &) {
        throw;
    } catch (const std::exception &e) {
        throw error{ error_code::backend_failure, std::string{ "embedding backend failed: " } + e.what() };
    }
    if (emb.frames == 0) {
        throw error{ error_code::backend_failure, "embedding backend returned no frames" };
    }
    if (emb.embedding_dim != backend.embedding_dim() || emb.values.size() != emb.frames * emb.embedding_dim) {
        throw error{ error_code::backend_failure, fmt::format("embedding backend returned width {} but declares {}", emb.embedding_dim, backend.embedding_dim()) };
    }
    if (!std::all_of(emb.values.begin(), emb.values.end(), [](float v) { return std::isfinite(v); })) {
        throw error{ error_code::backend_failure, "embedding backend returned non-finite values" };
    }
    return emb;
}

paralinguistic_embedding pool_embedding(const frame_embeddings &frames) {
    if (frames.frames == 0 || frames.values.empty()) {
        throw error{ error_code::empty_frames, "cannot pool zero frames" };
    }
    paralinguistic_embedding pooled;
    pooled.values.resize(frames.embedding_dim);
    std::vector<double> column(frames.frames);
    for (std::size_t i = 0; i < frames.embedding_dim; ++i) {
        for (std::size_t t = 0; t < frames.frames; ++t) {
            column[t] = frames.values[t * frames.embedding_dim + i];
        }
        // Summing in sorted order makes the mean independent of frame order.
        std::sort(column.begin(), column.end());
        double sum = 0.0;
        for (const double v : column) {
            sum += v;
        }
        pooled.values[i] = sum / static_cast<double>(frames.frames);
    }
    return pooled;
}

std::vector<std::byte> serialize_neuemb(const frame_embeddings &frames) {
    byte_writer w;
    w.put_string(neuemb_magic);
    w.put_u32(static_cast<std::uint32_t>(frames.embedding_dim));
    w.put_u32(static_cast<std::uint32_t>(frames.frames));
    for (const float v : frames.values) {
        w.put_f32(v);
    }
    return w.release();
}

frame_embeddings parse_neuemb(std::span<const std::byte> bytes) {
    byte_reader r{ bytes, error_code::corrupt_artifact };
    if (r.string(neuemb_magic.size()) != neuemb_magic) {
        throw error{ error_code::corrupt_artifact, "missing NEUEMB1 magic" };
    }
    frame_embeddings emb;
    emb.embedding_dim = r.u32();
    emb.frames = r.u32();
    const std::size_t count = emb.embedding_dim * emb.frames;
    if (count > r.remaining() / 4 || r.remaining() != count * 4) {
        throw error{ error_code::corrupt_artifact, "NEUEMB1 payload size does not match header" };
    }
    emb.values.resize(count);
    for (float &v : emb.values) {
        v = r.f32();
    }
    return emb;
}

}  // namespace neuro::paralinguistic
