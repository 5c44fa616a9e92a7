#include "mitfas/error.hpp"
#include "mitfas/sampling.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>

using namespace mitfas;

namespace {

std::vector<PixelPatch> random_patches(std::size_t n, std::uint64_t seed, int w = 12, int h = 10) {
    std::mt19937_64 rng(seed);
    std::vector<PixelPatch> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(oracle::random_patch(rng, w, h, 1 << (1 + rng() % 7)));
    return out;
}

bool same_values(const PixelPatch& a, const PixelPatch& b) {
    return std::equal(a.values().begin(), a.values().end(), b.values().begin(), b.values().end());
}

}  // namespace

TEST_CASE("candidate pools") {
    CHECK(candidate_pool(0, 5, 100) == IndexRange{1, 5});
    CHECK(candidate_pool(97, 5, 100) == IndexRange{98, 99});
    CHECK(candidate_pool(41, 1, 100) == IndexRange{42, 42});
    CHECK(candidate_pool(0, 5, 100).size() == 5);
    CHECK_THROWS_AS(candidate_pool(99, 5, 100), RuntimeError);
    CHECK_THROWS_AS(candidate_pool(3, 0, 100), ConfigError);
}

TEST_CASE("candidate scores") {
    const auto ps = random_patches(5, 17);
    SamplingConfig c;
    c.bins = 16;
    const std::vector<PixelPatch> one{ps[0]};
    CHECK(score_candidate(ps[0], one, ps[1], c) == doctest::Approx(2.0 * mutual_information(ps[0], ps[1], 16)));

    c.beta = 0.0;
    CHECK(score_candidate(ps[2], one, ps[1], c) == mutual_information(ps[2], ps[1], 16));

    c.alpha = 1.0;
    c.beta = 0.5;
    const std::vector<PixelPatch> three{ps[0], ps[1], ps[2]};
    double sum = 0.0;
    for (const auto& s : three) sum += mutual_information(s, ps[4], 16);
    const double expected = mutual_information(ps[2], ps[4], 16) + 0.5 * sum / 3.0;
    CHECK(score_candidate(ps[2], three, ps[4], c) == doctest::Approx(expected).epsilon(1e-12));

    CHECK_THROWS_AS(score_candidate(ps[0], std::vector<PixelPatch>{}, ps[1], c), ConfigError);
}

TEST_CASE("default stride bound") {
    CHECK(default_stride_max(100, 16) == 12);
    CHECK(default_stride_max(32, 16) == 4);
    CHECK(default_stride_max(20, 16) == 2);
    CHECK(default_stride_max(5, 16) == 1);
}

TEST_CASE("uniform draws stay in range and repeat under a seed") {
    std::mt19937_64 a(42), b(42);
    std::vector<int> seen(7, 0);
    for (int i = 0; i < 2000; ++i) {
        const auto x = uniform_draw(a, 3, 9);
        CHECK(x == uniform_draw(b, 3, 9));
        REQUIRE(x >= 3);
        REQUIRE(x <= 9);
        ++seen[x - 3];
    }
    for (int s : seen) CHECK(s > 200);
    CHECK(uniform_draw(a, 5, 5) == 5);
}

TEST_CASE("identical patches give consecutive picks from the start frame") {
    const std::vector<PixelPatch> ps(30, random_patches(1, 3).front());
    SamplingConfig c;
    c.n_frames = 8;
    c.seed = 11;
    const SampleResult r = sample_sequence(ps, c);
    const auto idx = r.indices();
    REQUIRE(idx.size() == 8);
    for (std::size_t i = 1; i < idx.size(); ++i) CHECK(idx[i] == idx[i - 1] + 1);
    CHECK(idx.front() <= 30 - 8);
}

TEST_CASE("duplicates of the previous pick are avoided") {
    const auto novel = random_patches(20, 29);
    std::vector<PixelPatch> ps;
    for (const auto& p : novel) {
        ps.push_back(p);
        ps.push_back(p);
    }
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        SamplingConfig c;
        c.alpha = 1.0;
        c.beta = 0.0;
        c.n_frames = 8;
        c.stride_max = 2;
        c.bins = 32;
        c.seed = seed;
        const SampleResult r = sample_sequence(ps, c);
        for (std::size_t i = 1; i < r.steps.size(); ++i) {
            const auto& step = r.steps[i];
            const PixelPatch& prev = ps[r.steps[i - 1].index];
            bool distinct_available = false;
            for (std::size_t k = step.pool.first; k <= step.pool.last; ++k) {
                distinct_available |= !same_values(ps[k], prev);
            }
            if (distinct_available) CHECK_FALSE(same_values(ps[step.index], prev));
        }
    }
}

TEST_CASE("sampler agrees with an independent greedy re-run") {
    for (std::uint64_t seed : {1ULL, 7ULL, 99ULL, 2024ULL}) {
        const auto ps = random_patches(10, seed + 100);
        SamplingConfig c;
        c.n_frames = 3;
        c.bins = 16;
        c.seed = seed;
        const auto expected = oracle::greedy_sampler(ps, 1.0, 1.0, 3, 16, seed);
        CHECK(sample_sequence(ps, c).indices() == expected);

        c.n_frames = 5;
        c.alpha = 0.7;
        c.beta = 0.3;
        c.stride_max = 4;
        CHECK(sample_sequence(ps, c).indices() == oracle::greedy_sampler(ps, 0.7, 0.3, 5, 16, seed, 4));
    }
}

TEST_CASE("sample result invariants and reproducibility") {
    const auto ps = random_patches(40, 5);
    SamplingConfig c;
    c.n_frames = 16;
    c.bins = 32;
    c.seed = 1234;
    const SampleResult a = sample_sequence(ps, c);
    const SampleResult b = sample_sequence(ps, c);
    CHECK(a == b);
    CHECK(a.seed == 1234);
    const auto idx = a.indices();
    REQUIRE(idx.size() == 16);
    CHECK(std::is_sorted(idx.begin(), idx.end()));
    CHECK(std::adjacent_find(idx.begin(), idx.end()) == idx.end());
    CHECK(idx.back() < 40);
    CHECK(a.steps.front().pool == IndexRange{0, 24});
    for (std::size_t i = 1; i < a.steps.size(); ++i) {
        CHECK(a.steps[i].pool.contains(a.steps[i].index));
        CHECK(a.steps[i].stride >= 1);
        CHECK(a.steps[i].stride <= default_stride_max(40, 16));
    }

    c.seed = 1235;
    CHECK(sample_sequence(ps, c).indices() != idx);  // different seed, different draws here
}

TEST_CASE("a full sample always exists") {
    const auto ps = random_patches(16, 8);
    SamplingConfig c;
    c.n_frames = 16;
    c.bins = 8;
    c.stride_max = 50;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        c.seed = seed;
        const auto idx = sample_sequence(ps, c).indices();
        for (std::size_t i = 0; i < 16; ++i) CHECK(idx[i] == i);
    }
}

TEST_CASE("sampling config errors") {
    const auto ps = random_patches(5, 1);
    SamplingConfig c;
    c.n_frames = 6;
    CHECK_THROWS_AS(sample_sequence(ps, c), ConfigError);
    c = SamplingConfig{};
    c.n_frames = 2;
    c.alpha = -1.0;
    CHECK_THROWS_AS(sample_sequence(ps, c), ConfigError);
    c = SamplingConfig{};
    c.n_frames = 2;
    c.stride_max = 0;
    CHECK_THROWS_AS(sample_sequence(ps, c), ConfigError);

    std::vector<PixelPatch> mixed{PixelPatch(4, 4), PixelPatch(4, 5)};
    c = SamplingConfig{};
    c.n_frames = 2;
    CHECK_THROWS_AS(sample_sequence(mixed, c), InputError);
}
