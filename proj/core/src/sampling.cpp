#include "mitfas/sampling.hpp"

#include "mitfas/error.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace mitfas {

void validate(const SamplingConfig& config) {
    if (!(config.alpha >= 0.0) || !(config.beta >= 0.0)) throw ConfigError("alpha and beta must be >= 0");
    if (config.alpha == 0.0 && config.beta == 0.0) throw ConfigError("alpha and beta must not both be 0");
    if (config.n_frames < 1) throw ConfigError("n_frames must be >= 1");
    check_bins(config.bins);
    if (config.stride_max && *config.stride_max < 1) throw ConfigError("stride_max must be >= 1");
}

std::vector<std::size_t> SampleResult::indices() const {
    std::vector<std::size_t> out;
    out.reserve(steps.size());
    for (const auto& s : steps) out.push_back(s.index);
    return out;
}

IndexRange candidate_pool(std::size_t k_prev, int stride, std::size_t total) {
    if (stride < 1) throw ConfigError("candidate_pool: stride must be >= 1");
    if (total == 0 || k_prev + 1 >= total) {
        throw RuntimeError("candidate pool exhausted: no frame after index " + std::to_string(k_prev) + " of " +
                           std::to_string(total));
    }
    return IndexRange{k_prev + 1, std::min(k_prev + static_cast<std::size_t>(stride), total - 1)};
}

double score_candidate(const PixelPatch& prev, std::span<const PixelPatch> sampled, const PixelPatch& candidate,
                       const SamplingConfig& config) {
    if (sampled.empty()) throw ConfigError("score_candidate: sampled set is empty");
    double redundancy = 0.0;
    for (const auto& s : sampled) redundancy += mutual_information(s, candidate, config.bins);
    return config.alpha * mutual_information(prev, candidate, config.bins) +
           config.beta / static_cast<double>(sampled.size()) * redundancy;
}

int default_stride_max(std::size_t total, int n_frames) {
    return std::max<int>(1, static_cast<int>(2 * (total / static_cast<std::size_t>(n_frames))));
}

std::uint64_t uniform_draw(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo;
    if (span == std::numeric_limits<std::uint64_t>::max()) return rng();
    const std::uint64_t range = span + 1;
    // Rejection keeps the draw unbiased: accept only below the largest multiple of range.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % range);
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return lo + x % range;
}

SampleResult sample_sequence(std::span<const PixelPatch> patches, const SamplingConfig& config) {
    validate(config);
    const std::size_t total = patches.size();
    const auto n = static_cast<std::size_t>(config.n_frames);
    if (total < n) {
        throw ConfigError("n_frames (" + std::to_string(n) + ") exceeds the sequence length (" + std::to_string(total) +
                          ")");
    }
    for (const auto& p : patches) {
        if (!p.same_shape(patches.front())) throw InputError("sample_sequence: patches differ in size");
    }

    std::mt19937_64 rng(config.seed);
    const int stride_max = config.stride_max.value_or(default_stride_max(total, config.n_frames));

    SampleResult result;
    result.seed = config.seed;
    const std::size_t start = uniform_draw(rng, 0, total - n);
    result.steps.push_back(SampleStep{start, 0.0, IndexRange{0, total - n}, 0});

    std::vector<PixelPatch> sampled{patches[start]};
    for (std::size_t i = 1; i < n; ++i) {
        const int stride = static_cast<int>(uniform_draw(rng, 1, static_cast<std::uint64_t>(stride_max)));
        const std::size_t still_needed = n - 1 - i;
        IndexRange pool;
        try {
            pool = candidate_pool(result.steps.back().index, stride, total - still_needed);
        } catch (const RuntimeError& e) {
            std::string picked;
            for (const auto& s : result.steps) picked += (picked.empty() ? "" : ",") + std::to_string(s.index);
            throw RuntimeError("sampling step " + std::to_string(i) + " failed after picking [" + picked + "]: " +
                               e.what());
        }
        std::size_t best = pool.first;
        double best_score = 0.0;
        for (std::size_t k = pool.first; k <= pool.last; ++k) {
            const double s = score_candidate(sampled.back(), sampled, patches[k], config);
            if (k == pool.first || s < best_score) {
                best = k;
                best_score = s;
            }
        }
        result.steps.push_back(SampleStep{best, best_score, pool, stride});
        sampled.push_back(patches[best]);
    }
    return result;
}

}  // namespace mitfas
