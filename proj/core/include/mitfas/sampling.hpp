#pragma once

#include "mitfas/mi_core.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace mitfas {

struct SamplingConfig {
    double alpha = 1.0;
    double beta = 1.0;
    int n_frames = 16;
    int bins = kDefaultBins;
    std::uint64_t seed = 0;
    std::optional<int> stride_max;  // default max(1, 2 * floor(T / n_frames))

    friend bool operator==(const SamplingConfig&, const SamplingConfig&) = default;
};

void validate(const SamplingConfig& config);

/// Closed index interval [first, last].
struct IndexRange {
    std::size_t first = 0;
    std::size_t last = 0;

    bool contains(std::size_t k) const noexcept { return k >= first && k <= last; }
    std::size_t size() const noexcept { return last - first + 1; }
    friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

struct SampleStep {
    std::size_t index = 0;
    double score = 0.0;   // objective of the picked candidate; 0 for the start frame
    IndexRange pool;      // the start frame records its draw range
    int stride = 0;       // stride drawn for this step; 0 for the start frame

    friend bool operator==(const SampleStep&, const SampleStep&) = default;
};

struct SampleResult {
    std::vector<SampleStep> steps;
    std::uint64_t seed = 0;

    std::vector<std::size_t> indices() const;
    friend bool operator==(const SampleResult&, const SampleResult&) = default;
};

/// Candidates (k_prev, min(k_prev + r, total - 1)].
IndexRange candidate_pool(std::size_t k_prev, int stride, std::size_t total);

/// alpha·I(prev; candidate) + beta/|sampled| · Σ_j I(sampled_j; candidate).
/// Lower is better.
double score_candidate(const PixelPatch& prev, std::span<const PixelPatch> sampled, const PixelPatch& candidate,
                       const SamplingConfig& config);

int default_stride_max(std::size_t total, int n_frames);

/// Uniform draw in [lo, hi] from a 64-bit engine; the same on every platform.
std::uint64_t uniform_draw(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi);

/// Greedy informative-frame selection. A start frame is drawn uniformly from
/// [0, T - n_frames]; each later pick minimizes score_candidate over a pool
/// spanned by a freshly drawn stride. Pools are capped so the picks still
/// needed after the current one always fit. Ties go to the smallest index.
SampleResult sample_sequence(std::span<const PixelPatch> patches, const SamplingConfig& config);

}  // namespace mitfas
