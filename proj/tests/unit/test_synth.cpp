#include "mitfas/error.hpp"
#include "mitfas/synth.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace mitfas;

TEST_CASE("zero motion and zero noise give identical frames") {
    MotionSpec spec;
    spec.start_x = 30;
    spec.start_y = 20;
    spec.path = linear_path(5, 0, 0);
    const auto seq = generate_sequence(120, 90, make_sprite(20, 30, 1), spec);
    REQUIRE(seq.frames.size() == 5);
    for (const auto& f : seq.frames) CHECK(f == seq.frames.front());
    for (const auto& b : seq.truth) CHECK(b == BBox{30, 20, 20, 30});
}

TEST_CASE("linear path gives an arithmetic sequence of boxes") {
    MotionSpec spec;
    spec.path = linear_path(32, 4, 0);
    center_path(spec, 320, 240, 40, 60);
    const auto seq = generate_sequence(320, 240, make_sprite(40, 60, 2), spec);
    REQUIRE(seq.truth.size() == 32);
    for (std::size_t t = 1; t < 32; ++t) {
        CHECK(seq.truth[t].x - seq.truth[t - 1].x == 4);
        CHECK(seq.truth[t].y == seq.truth[0].y);
    }
    // Centred: equal margins left of the first box and right of the last.
    CHECK(seq.truth.front().x == 320 - (seq.truth.back().x + 40));
}

TEST_CASE("sprite pixels are pasted at the true box") {
    MotionSpec spec;
    spec.start_x = 11;
    spec.start_y = 7;
    spec.path = {{0, 0}, {3, -2}};
    const PixelPatch sprite = make_sprite(16, 12, 4);
    const auto seq = generate_sequence(64, 48, sprite, spec);
    CHECK(seq.truth[1] == BBox{14, 5, 16, 12});
    for (int v = 0; v < 12; ++v)
        for (int u = 0; u < 16; ++u) CHECK(seq.frames[1].at(14 + u, 5 + v) == sprite.at(u, v));
}

TEST_CASE("generation is deterministic under a seed") {
    MotionSpec spec;
    spec.seed = 9;
    spec.noise_sigma = 8.0;
    spec.path = jittered_path(6, 2, 1, 2, 9);
    center_path(spec, 160, 120, 20, 30);
    const auto a = generate_sequence(160, 120, make_sprite(20, 30, 9), spec);
    const auto b = generate_sequence(160, 120, make_sprite(20, 30, 9), spec);
    CHECK(a.frames == b.frames);
    CHECK(a.truth == b.truth);

    spec.seed = 10;
    const auto c = generate_sequence(160, 120, make_sprite(20, 30, 9), spec);
    CHECK(c.frames != a.frames);
}

TEST_CASE("noise perturbs pixels with roughly the requested spread") {
    MotionSpec spec;
    spec.start_x = 10;
    spec.start_y = 10;
    spec.path = linear_path(1, 0, 0);
    spec.background = Background::Gradient;
    const auto clean = generate_sequence(200, 150, make_sprite(20, 20, 1), spec);
    spec.noise_sigma = 8.0;
    spec.seed = 3;
    const auto noisy = generate_sequence(200, 150, make_sprite(20, 20, 1), spec);
    double ss = 0.0;
    std::size_t n = 0;
    for (int y = 0; y < 150; ++y) {
        for (int x = 60; x < 140; ++x) {  // mid-gradient, away from clipping
            const double d = double(noisy.frames[0].at(x, y)) - clean.frames[0].at(x, y);
            ss += d * d;
            ++n;
        }
    }
    const double sigma = std::sqrt(ss / double(n));
    CHECK(sigma > 7.0);
    CHECK(sigma < 9.0);
}

TEST_CASE("scale drift resizes the sprite") {
    MotionSpec spec;
    spec.start_x = 20;
    spec.start_y = 20;
    spec.path = linear_path(3, 1, 0);
    spec.scale_drift = {1.0, 1.1, 1.2};
    const auto seq = generate_sequence(120, 120, make_sprite(20, 30, 1), spec);
    CHECK(seq.truth[1] == BBox{21, 20, 22, 33});
    CHECK(seq.truth[2] == BBox{22, 20, 24, 36});
}

TEST_CASE("jittered path stays within the amplitude") {
    const auto path = jittered_path(100, 3, -1, 2, 77);
    CHECK(path.front() == std::pair<int, int>{0, 0});
    for (std::size_t t = 1; t < path.size(); ++t) {
        CHECK(std::abs(path[t].first - 3) <= 2);
        CHECK(std::abs(path[t].second + 1) <= 2);
    }
    CHECK(jittered_path(100, 3, -1, 2, 77) == path);
}

TEST_CASE("generation errors") {
    MotionSpec spec;
    spec.start_x = 90;
    spec.start_y = 10;
    spec.path = linear_path(10, 5, 0);
    CHECK_THROWS_WITH_AS(generate_sequence(120, 90, make_sprite(20, 20, 1), spec), doctest::Contains("step 3"),
                         RuntimeError);
    spec.path.clear();
    CHECK_THROWS_AS(generate_sequence(120, 90, make_sprite(20, 20, 1), spec), ConfigError);
    spec.path = linear_path(2, 0, 0);
    spec.start_x = 0;
    spec.noise_sigma = -1.0;
    CHECK_THROWS_AS(generate_sequence(120, 90, make_sprite(20, 20, 1), spec), ConfigError);
}

TEST_CASE("sprite content") {
    const PixelPatch a = make_sprite(40, 60, 5);
    CHECK(a.width() == 40);
    CHECK(a.height() == 60);
    CHECK(make_sprite(40, 60, 5).values().size() == a.values().size());
    CHECK(std::equal(a.values().begin(), a.values().end(), make_sprite(40, 60, 5).values().begin()));
    const auto [lo, hi] = std::minmax_element(a.values().begin(), a.values().end());
    CHECK(*hi - *lo > 100);  // panels span a wide intensity range
}
