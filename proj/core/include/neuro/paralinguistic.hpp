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

#ifndef NEURO_PARALINGUISTIC_HPP_
#define NEURO_PARALINGUISTIC_HPP_

#include "neuro/audio.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace neuro::paralinguistic {

/// T x D row-major matrix of frame-level embeddings.
struct frame_embeddings {
    std::size_t frames{ 0 };
    std::size_t embedding_dim{ 0 };
    std::vector<float> values;

    [[nodiscard]] std::span<const float> frame(std::size_t t) const {
        return std::span{ values }.subspan(t * embedding_dim, embedding_dim);
    }

    friend bool operator==(const frame_embeddings &, const frame_embeddings &) = default;
};

/// Clip-level vector produced by pooling.
struct paralinguistic_embedding {
    std::vector<double> values;

    [[nodiscard]] std::size_t embedding_dim() const noexcept { return values.size(); }
    friend bool operator==(const paralinguistic_embedding &, const paralinguistic_embedding &) = default;
};

/// Output width of the TRILLsson-family models.
inline constexpr std::size_t real_model_embedding_dim = 1024;

class embedding_backend {
  public:
    virtual ~embedding_backend() = default;

    [[nodiscard]] virtual std::string_view kind() const noexcept = 0;
    [[nodiscard]] virtual bool ready() const = 0;
    [[nodiscard]] virtual std::size_t embedding_dim() const noexcept = 0;
    /// Shortest clip the backend accepts, in seconds.
    [[nodiscard]] virtual double min_window_s() const noexcept = 0;
    /// Stable description of the backend configuration, used as a cache key.
    [[nodiscard]] virtual std::string identity() const = 0;
    [[nodiscard]] virtual frame_embeddings run(const audio::audio_clip &clip) = 0;
};

/**
 * Deterministic stand-in for the embedding model.
 *
 * Frames are consecutive 0.5 s windows, T = max(1, floor(duration / 0.5)).
 * Each frame is summarized by spectral descriptors (log band-energy shares
 * over 18 log-spaced bands, log RMS level, zero-crossing rate) which pass
 * through a fixed random projection drawn from the seed and a tanh. A small
 * jitter from a counter-based generator keyed on hash(seed, frame samples)
 * is mixed in, so any change in content changes the output. Values stay in
 * [-1, 1].
 */
class stub_embedding_backend final : public embedding_backend {
  public:
    explicit stub_embedding_backend(std::uint64_t seed = 0, std::size_t embedding_dim = default_dim);

    static constexpr std::size_t default_dim = 64;
    static constexpr double hop_s = 0.5;
    static constexpr std::size_t descriptor_count = 20;

    [[nodiscard]] std::string_view kind() const noexcept override { return "stub"; }
    [[nodiscard]] bool ready() const override { return true; }
    [[nodiscard]] std::size_t embedding_dim() const noexcept override { return dim_; }
    [[nodiscard]] double min_window_s() const noexcept override { return 0.1; }
    [[nodiscard]] std::string identity() const override;
    [[nodiscard]] frame_embeddings run(const audio::audio_clip &clip) override;

    /// Descriptor vector of one frame, exposed for tests and diagnostics.
    [[nodiscard]] static std::vector<double> describe_frame(std::span<const float> frame, std::uint32_t sample_rate_hz);

  private:
    std::uint64_t seed_;
    std::size_t dim_;
    std::vector<double> projection_;  // dim x descriptor_count
    std::vector<double> bias_;
};

/**
 * Adapter for an external embedding model, invoked as
 * `<command> --model <model_id> <wav_path> <output_path>`; the command writes
 * a NEUEMB1 matrix to output_path. One inference runs at a time.
 */
class command_embedding_backend final : public embedding_backend {
  public:
    command_embedding_backend(std::string command, std::string model_id, std::size_t embedding_dim = real_model_embedding_dim);

    [[nodiscard]] std::string_view kind() const noexcept override { return "real"; }
    [[nodiscard]] bool ready() const override;
    [[nodiscard]] std::size_t embedding_dim() const noexcept override { return dim_; }
    [[nodiscard]] double min_window_s() const noexcept override { return 0.1; }
    [[nodiscard]] std::string identity() const override;
    [[nodiscard]] frame_embeddings run(const audio::audio_clip &clip) override;

  private:
    std::string command_;
    std::string model_id_;
    std::size_t dim_;
    std::mutex in_flight_;
};

/// Wraps a backend with an on-disk NEUEMB1 cache keyed on clip content and
/// backend identity.
class cached_embedding_backend final : public embedding_backend {
  public:
    cached_embedding_backend(std::shared_ptr<embedding_backend> inner, std::filesystem::path cache_dir);

    [[nodiscard]] std::string_view kind() const noexcept override { return inner_->kind(); }
    [[nodiscard]] bool ready() const override { return inner_->ready(); }
    [[nodiscard]] std::size_t embedding_dim() const noexcept override { return inner_->embedding_dim(); }
    [[nodiscard]] double min_window_s() const noexcept override { return inner_->min_window_s(); }
    [[nodiscard]] std::string identity() const override { return inner_->identity(); }
    [[nodiscard]] frame_embeddings run(const audio::audio_clip &clip) override;

    [[nodiscard]] std::filesystem::path cache_path(const audio::audio_clip &clip) const;

  private:
    std::shared_ptr<embedding_backend> inner_;
    std::filesystem::path cache_dir_;
};

/**
 * Runs the backend on a pipeline-rate clip.
 *
 * Throws error_code::rate_mismatch for clips not at 16 kHz,
 * error_code::clip_too_short below the backend's minimum window, and
 * error_code::backend_failure when the backend throws or returns a malformed
 * matrix (no frames, wrong width, non-finite entries).
 */
[[nodiscard]] frame_embeddings embed(const audio::audio_clip &clip, embedding_backend &backend);

/// Element-wise mean over frames. Throws error_code::empty_frames when T = 0.
[[nodiscard]] paralinguistic_embedding pool_embedding(const frame_embeddings &frames);

/// NEUEMB1: 7-byte magic, dim (u32 LE), T (u32 LE), T x dim f32 LE values.
[[nodiscard]] std::vector<std::byte> serialize_neuemb(const frame_embeddings &frames);
[[nodiscard]] frame_embeddings parse_neuemb(std::span<const std::byte> bytes);

inline constexpr std::string_view neuemb_magic = "NEUEMB1";

}  // namespace neuro::paralinguistic

#endif  // NEURO_PARALINGUISTIC_HPP_
