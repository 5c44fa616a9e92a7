#include "mitfas/error.hpp"
#include "mitfas/mi_core.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace mitfas;

namespace {

PixelPatch p2x2(std::vector<std::uint8_t> v) { return PixelPatch(2, 2, std::move(v)); }

}  // namespace

TEST_CASE("joint histogram of identical and anti-correlated patches") {
    const auto a = p2x2({0, 0, 255, 255});
    const auto h = build_joint_histogram(a, a, 2);
    CHECK(h.total == 4);
    CHECK(h.counts == std::vector<std::uint64_t>{2, 0, 0, 2});

    const auto b = p2x2({255, 255, 0, 0});
    const auto anti = build_joint_histogram(a, b, 2);
    CHECK(anti.counts == std::vector<std::uint64_t>{0, 2, 2, 0});
    CHECK(anti.total == 4);
}

TEST_CASE("joint histogram matches hand binning with four bins") {
    // bin(v) = floor(4v/256): 10->0 200->3 60->0 130->2 | 15->0 190->2 250->3 5->0
    const auto h = build_joint_histogram(p2x2({10, 200, 60, 130}), p2x2({15, 190, 250, 5}), 4);
    std::vector<std::uint64_t> expected(16, 0);
    expected[0 * 4 + 0] = 1;
    expected[3 * 4 + 2] = 1;
    expected[0 * 4 + 3] = 1;
    expected[2 * 4 + 0] = 1;
    CHECK(h.counts == expected);
    CHECK(h.total == 4);
}

TEST_CASE("joint histogram rejects bad input") {
    CHECK_THROWS_AS(build_joint_histogram(PixelPatch(2, 2), PixelPatch(3, 2), 2), ConfigError);
    CHECK_THROWS_AS(build_joint_histogram(PixelPatch(2, 2), PixelPatch(2, 2), 1), ConfigError);
    CHECK_THROWS_AS(build_joint_histogram(PixelPatch(2, 2), PixelPatch(2, 2), 257), ConfigError);
    try {
        build_joint_histogram(PixelPatch(2, 2), PixelPatch(3, 4), 2);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("2x2") != std::string::npos);
        CHECK(std::string(e.what()).find("3x4") != std::string::npos);
    }
}

TEST_CASE("pmfs from histogram") {
    JointHistogram h{2, {2, 0, 0, 2}, 4};
    auto p = pmfs_from_histogram(h);
    CHECK(p.joint == std::vector<double>{0.5, 0.0, 0.0, 0.5});
    CHECK(p.marginal_v == std::vector<double>{0.5, 0.5});
    CHECK(p.marginal_z == std::vector<double>{0.5, 0.5});

    JointHistogram deg{2, {4, 0, 0, 0}, 4};
    p = pmfs_from_histogram(deg);
    CHECK(p.joint == std::vector<double>{1.0, 0.0, 0.0, 0.0});
    CHECK(p.marginal_v == std::vector<double>{1.0, 0.0});
    CHECK(p.marginal_z == std::vector<double>{1.0, 0.0});

    CHECK_THROWS_AS(pmfs_from_histogram(JointHistogram{2, {0, 0, 0, 0}, 0}), RuntimeError);
}

TEST_CASE("pmf invariants on random 8x8 patches") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = oracle::random_patch(rng, 8, 8), b = oracle::random_patch(rng, 8, 8);
        const auto p = pmfs_from_histogram(build_joint_histogram(a, b, 16));
        double sum = 0.0;
        for (double v : p.joint) sum += v;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        for (int i = 0; i < 16; ++i) {
            double row = 0.0, col = 0.0;
            for (int j = 0; j < 16; ++j) {
                row += p.at(i, j);
                col += p.at(j, i);
            }
            CHECK(std::abs(row - p.marginal_v[i]) <= 1e-12);
            CHECK(std::abs(col - p.marginal_z[i]) <= 1e-12);
        }
    }
}

TEST_CASE("entropy values") {
    CHECK(entropy(std::vector<double>{0.5, 0.5}) == 1.0);
    CHECK(entropy(std::vector<double>{1.0, 0.0}) == 0.0);
    CHECK(entropy(std::vector<double>{0.25, 0.25, 0.25, 0.25}) == 2.0);
    CHECK_THROWS_AS(entropy(std::vector<double>{0.5, 0.6}), ConfigError);
    CHECK_THROWS_AS(entropy(std::vector<double>{1.5, -0.5}), ConfigError);
}

TEST_CASE("joint entropy values and inequality chain") {
    CHECK(joint_entropy(std::vector<double>{0.5, 0, 0, 0.5}) == 1.0);
    CHECK(joint_entropy(std::vector<double>{0.25, 0.25, 0.25, 0.25}) == 2.0);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int bins = 2 + static_cast<int>(rng() % 7);
        std::vector<double> joint(static_cast<std::size_t>(bins) * bins);
        double sum = 0.0;
        for (auto& v : joint) {
            v = u(rng) < 0.3 ? 0.0 : u(rng);
            sum += v;
        }
        if (sum == 0.0) continue;
        std::vector<double> mv(bins, 0.0), mz(bins, 0.0);
        for (int i = 0; i < bins; ++i) {
            for (int j = 0; j < bins; ++j) {
                auto& p = joint[static_cast<std::size_t>(i) * bins + j];
                p /= sum;
            }
        }
        for (int i = 0; i < bins; ++i) {
            for (int j = 0; j < bins; ++j) {
                mv[i] += joint[static_cast<std::size_t>(i) * bins + j];
                mz[j] += joint[static_cast<std::size_t>(i) * bins + j];
            }
        }
        const double hxy = joint_entropy(joint), hx = entropy(mv), hz = entropy(mz);
        CHECK(std::max(hx, hz) <= hxy + 1e-9);
        CHECK(hxy <= hx + hz + 1e-9);
    }
}

TEST_CASE("mutual information analytic cases") {
    const auto a = p2x2({0, 0, 255, 255});
    CHECK(mutual_information(a, p2x2({255, 255, 0, 0}), 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(mutual_information(a, a, 2) - oracle::marginal_entropy(a, 2)) <= 1e-9);

    std::mt19937_64 rng(3);
    const auto b = oracle::random_patch(rng, 16, 16);
    CHECK(mutual_information(PixelPatch(16, 16, std::vector<std::uint8_t>(256, 77)), b, 32) == 0.0);
    CHECK(std::abs(mutual_information(b, b, 32) - oracle::marginal_entropy(b, 32)) <= 1e-9);
}

TEST_CASE("mutual information properties on random pairs") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const int w = 4 + static_cast<int>(rng() % 30), h = 4 + static_cast<int>(rng() % 30);
        const int bins = std::vector<int>{2, 7, 16, 64, 128, 256}[rng() % 6];
        const auto a = oracle::random_patch(rng, w, h, 1 << (1 + rng() % 8));
        const auto b = oracle::random_patch(rng, w, h, 1 << (1 + rng() % 8));
        const double ab = mutual_information(a, b, bins);
        CHECK(ab == mutual_information(b, a, bins));
        CHECK(ab >= 0.0);
        CHECK(std::abs(ab - oracle::mi_literal(a, b, bins)) <= 1e-9);

        const auto pmf = pmfs_from_histogram(build_joint_histogram(a, b, bins));
        const double hv = entropy(pmf.marginal_v), hz = entropy(pmf.marginal_z), hj = joint_entropy(pmf.joint);
        CHECK(std::abs(ab - (hv + hz - hj)) <= 1e-9);
        CHECK(ab <= std::min(hv, hz) + 1e-9);
    }
}

TEST_CASE("evaluator is bit-identical to mutual_information") {
    std::mt19937_64 rng(5);
    for (int bins : {2, 16, 128, 256}) {
        const auto ref = oracle::random_patch(rng, 23, 17);
        MiEvaluator eval(ref, bins);
        for (int k = 0; k < 20; ++k) {
            const auto cand = oracle::random_patch(rng, 23, 17, 1 << (1 + k % 8));
            CHECK(eval(cand.values()) == mutual_information(cand, ref, bins));
        }
    }
    MiEvaluator eval(PixelPatch(3, 3), 8);
    CHECK_THROWS_AS(eval(std::vector<std::uint8_t>(4, 0)), ConfigError);
}

TEST_CASE("approximate joint MI is the mean of pairwise MI") {
    std::mt19937_64 rng(21);
    const auto p = oracle::random_patch(rng, 12, 12), q = oracle::random_patch(rng, 12, 12);
    const std::vector<PixelPatch> one{p}, two{p, p};
    CHECK(joint_mi_approx(one, q, 16) == mutual_information(p, q, 16));
    CHECK(joint_mi_approx(two, q, 16) == mutual_information(p, q, 16));

    const std::vector<PixelPatch> three{oracle::random_patch(rng, 12, 12), oracle::random_patch(rng, 12, 12),
                                        oracle::random_patch(rng, 12, 12)};
    double sum = 0.0;
    for (const auto& s : three) sum += mutual_information(s, q, 16);
    CHECK(joint_mi_approx(three, q, 16) == doctest::Approx(sum / 3.0).epsilon(1e-12));
    CHECK_THROWS_AS(joint_mi_approx(std::vector<PixelPatch>{}, q, 16), ConfigError);
}

TEST_CASE("exact joint MI") {
    std::mt19937_64 rng(8);
    const auto p = oracle::random_patch(rng, 16, 16), q = oracle::random_patch(rng, 16, 16);
    CHECK(std::abs(joint_mi_exact(std::vector<PixelPatch>{p}, q, 16) - mutual_information(p, q, 16)) <= 1e-9);
    CHECK(std::abs(joint_mi_exact(std::vector<PixelPatch>{p, p}, q, 16) - mutual_information(p, q, 16)) <= 1e-9);

    // Two independent fair coins and their XOR.
    std::vector<std::uint8_t> x(4096), y(4096), z(4096);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = (rng() & 1) ? 255 : 0;
        y[i] = (rng() & 1) ? 255 : 0;
        z[i] = (x[i] != y[i]) ? 255 : 0;
    }
    const PixelPatch px(64, 64, x), py(64, 64, y), pz(64, 64, z);
    const std::vector<PixelPatch> pair{px, py};
    CHECK(joint_mi_exact(pair, pz, 2) > 0.99);
    CHECK(mutual_information(px, pz, 2) < 0.01);
    CHECK(mutual_information(py, pz, 2) < 0.01);

    for (int k = 0; k < 10; ++k) {
        const std::vector<PixelPatch> set{oracle::random_patch(rng, 10, 10), oracle::random_patch(rng, 10, 10)};
        const auto c = oracle::random_patch(rng, 10, 10);
        const double exact = joint_mi_exact(set, c, 8);
        CHECK(exact >= mutual_information(set[0], c, 8) - 1e-9);
        CHECK(exact >= mutual_information(set[1], c, 8) - 1e-9);
    }
}

TEST_CASE("exact joint MI capacity guard") {
    const std::vector<PixelPatch> set(3, PixelPatch(4, 4));
    CHECK_THROWS_WITH_AS(joint_mi_exact(set, PixelPatch(4, 4), 64), doctest::Contains("2^20"), RuntimeError);
    CHECK_NOTHROW(joint_mi_exact(set, PixelPatch(4, 4), 32));  // 32^4 = 2^20
}

TEST_CASE("patch construction validates shape") {
    CHECK_THROWS_AS(PixelPatch(0, 3), ConfigError);
    CHECK_THROWS_AS(PixelPatch(2, 2, std::vector<std::uint8_t>(3)), ConfigError);
}
