#include "mitfas/error.hpp"
#include "mitfas/similarity.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace mitfas;

namespace {

PixelPatch row(std::vector<std::uint8_t> v) {
    const int n = static_cast<int>(v.size());
    return PixelPatch(n, 1, std::move(v));
}

}  // namespace

TEST_CASE("euclidean distance") {
    const auto a = row({1, 2, 3});
    CHECK(euclidean_distance(a, a) == 0.0);
    CHECK(euclidean_distance(row({0}), row({255})) == 255.0);

    std::mt19937_64 rng(1);
    const auto p = oracle::random_patch(rng, 9, 7), q = oracle::random_patch(rng, 9, 7);
    double ss = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = double(p.values()[i]) - double(q.values()[i]);
        ss += d * d;
    }
    CHECK(euclidean_distance(p, q) == doctest::Approx(std::sqrt(ss)).epsilon(1e-12));
    CHECK_THROWS_AS(euclidean_distance(PixelPatch(2, 2), PixelPatch(2, 3)), ConfigError);
}

TEST_CASE("cosine similarity") {
    const auto a = row({3, 4, 5});
    CHECK(cosine_similarity(a, a) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cosine_similarity(row({1, 0}), row({0, 1})) == 0.0);
    CHECK_THROWS_AS(cosine_similarity(row({0, 0}), row({1, 2})), RuntimeError);

    std::mt19937_64 rng(2);
    const auto p = oracle::random_patch(rng, 8, 8), q = oracle::random_patch(rng, 8, 8);
    double dot = 0, np = 0, nq = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        dot += double(p.values()[i]) * q.values()[i];
        np += double(p.values()[i]) * p.values()[i];
        nq += double(q.values()[i]) * q.values()[i];
    }
    CHECK(cosine_similarity(p, q) == doctest::Approx(dot / std::sqrt(np * nq)).epsilon(1e-12));
}

TEST_CASE("psnr") {
    const auto a = row({9, 9, 9});
    CHECK(psnr(a, a) == std::numeric_limits<double>::infinity());
    CHECK(psnr(row({0}), row({255})) == doctest::Approx(0.0));

    std::mt19937_64 rng(3);
    const auto p = oracle::random_patch(rng, 10, 6), q = oracle::random_patch(rng, 10, 6);
    double mse = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = double(p.values()[i]) - double(q.values()[i]);
        mse += d * d / double(p.size());
    }
    CHECK(psnr(p, q) == doctest::Approx(10.0 * std::log10(255.0 * 255.0 / mse)).epsilon(1e-12));
}

TEST_CASE("ssim") {
    std::mt19937_64 rng(4);
    const auto p = oracle::random_patch(rng, 16, 12), q = oracle::random_patch(rng, 16, 12);
    CHECK(ssim(p, p) == doctest::Approx(1.0).epsilon(1e-12));

    const PixelPatch black(10, 10), white(10, 10, std::vector<std::uint8_t>(100, 255));
    const double c1 = (0.01 * 255) * (0.01 * 255);
    CHECK(ssim(black, white) == doctest::Approx(c1 / (255.0 * 255.0 + c1)).epsilon(1e-12));

    CHECK(ssim(p, q) == doctest::Approx(oracle::ssim_loop(p, q)).epsilon(1e-10));
    const double s = ssim(p, q);
    CHECK(s >= -1.0);
    CHECK(s <= 1.0);
    CHECK_THROWS_AS(ssim(PixelPatch(7, 20), PixelPatch(7, 20)), ConfigError);
}

TEST_CASE("measure registry") {
    CHECK(polarity_of(Measure::MutualInformation) == Polarity::Maximize);
    CHECK(polarity_of(Measure::Euclidean) == Polarity::Minimize);
    CHECK(polarity_of(Measure::Ssim) == Polarity::Maximize);
    for (Measure m : {Measure::MutualInformation, Measure::Euclidean, Measure::Cosine, Measure::Psnr, Measure::Ssim}) {
        CHECK(parse_measure(measure_name(m)) == m);
    }
    CHECK_FALSE(parse_measure("sad").has_value());
    CHECK(oriented(Measure::Euclidean, 3.0) == -3.0);

    std::mt19937_64 rng(5);
    const auto p = oracle::random_patch(rng, 8, 8), q = oracle::random_patch(rng, 8, 8);
    CHECK(evaluate_measure(Measure::MutualInformation, p, q, 16) == mutual_information(p, q, 16));
    CHECK(evaluate_measure(Measure::Psnr, p, q) == psnr(p, q));
}
