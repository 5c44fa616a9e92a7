#include "mitfas/synth.hpp"

#include "mitfas/error.hpp"
#include "mitfas/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace mitfas {

namespace {

// Lattice of seeded values in [0, 1] sampled with smoothstep interpolation.
class ValueNoise {
public:
    ValueNoise(int width, int height, int cell, std::uint64_t seed)
        : cell_(cell), cols_(width / cell + 2), rows_(height / cell + 2) {
        std::mt19937_64 rng(seed);
        lattice_.resize(static_cast<std::size_t>(cols_) * rows_);
        for (auto& v : lattice_) v = static_cast<double>(uniform_draw(rng, 0, 1000000)) / 1e6;
    }

    double operator()(int x, int y) const {
        const int gx = x / cell_, gy = y / cell_;
        const double fx = smooth(static_cast<double>(x % cell_) / cell_);
        const double fy = smooth(static_cast<double>(y % cell_) / cell_);
        const double top = lerp(at(gx, gy), at(gx + 1, gy), fx);
        const double bottom = lerp(at(gx, gy + 1), at(gx + 1, gy + 1), fx);
        return lerp(top, bottom, fy);
    }

private:
    static double smooth(double t) { return t * t * (3.0 - 2.0 * t); }
    static double lerp(double a, double b, double t) { return a + (b - a) * t; }
    double at(int gx, int gy) const { return lattice_[static_cast<std::size_t>(gy) * cols_ + gx]; }

    int cell_;
    int cols_;
    int rows_;
    std::vector<double> lattice_;
};

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0)); }

PixelPatch resize_sprite(const PixelPatch& sprite, int w, int h) {
    if (w == sprite.width() && h == sprite.height()) return sprite;
    const Frame src(sprite.width(), sprite.height(), 1,
                    std::vector<std::uint8_t>(sprite.values().begin(), sprite.values().end()));
    PixelPatch out(w, h);
    // Map output pixel centres onto source pixel centres.
    auto dst = out.values();
    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            const double sx = std::clamp((u + 0.5) * sprite.width() / w - 0.5, 0.0, sprite.width() - 1.0);
            const double sy = std::clamp((v + 0.5) * sprite.height() / h - 0.5, 0.0, sprite.height() - 1.0);
            const int x0 = static_cast<int>(sx), y0 = static_cast<int>(sy);
            const int x1 = std::min(x0 + 1, sprite.width() - 1), y1 = std::min(y0 + 1, sprite.height() - 1);
            const double fx = sx - x0, fy = sy - y0;
            const double top = src.at(x0, y0) + fx * (src.at(x1, y0) - src.at(x0, y0));
            const double bottom = src.at(x0, y1) + fx * (src.at(x1, y1) - src.at(x0, y1));
            dst[static_cast<std::size_t>(v) * w + u] = to_byte(top + fy * (bottom - top));
        }
    }
    return out;
}

}  // namespace

Frame value_noise_background(int width, int height, std::uint64_t seed) {
    const ValueNoise coarse(width, height, 32, seed * 2 + 1);
    const ValueNoise fine(width, height, 8, seed * 2 + 2);
    Frame out(width, height, 1);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) out.at(x, y) = to_byte(255.0 * (0.6 * coarse(x, y) + 0.4 * fine(x, y)));
    }
    return out;
}

PixelPatch make_sprite(int width, int height, std::uint64_t seed) {
    // Panels on a jittered lattice keep MI falling off gradually away from the
    // true placement; per-pixel grain keeps one-pixel shifts distinguishable.
    constexpr int kPanel = 10;
    constexpr int kGrain = 12;
    std::mt19937_64 rng(seed * 3 + 11);
    const int cols = width / kPanel + 2, rows = height / kPanel + 2;
    std::vector<double> px, py, level;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            px.push_back((c - 0.5) * kPanel + static_cast<double>(uniform_draw(rng, 0, kPanel)));
            py.push_back((r - 0.5) * kPanel + static_cast<double>(uniform_draw(rng, 0, kPanel)));
            level.push_back(static_cast<double>(uniform_draw(rng, 30, 230)));
        }
    }
    PixelPatch sprite(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            std::size_t nearest = 0;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < px.size(); ++k) {
                const double d = (x - px[k]) * (x - px[k]) + (y - py[k]) * (y - py[k]);
                if (d < best) {
                    best = d;
                    nearest = k;
                }
            }
            const double grain = static_cast<double>(uniform_draw(rng, 0, 2 * kGrain)) - kGrain;
            sprite.at(x, y) = to_byte(level[nearest] + grain);
        }
    }
    return sprite;
}

std::vector<std::pair<int, int>> linear_path(int frames, int dx, int dy) {
    std::vector<std::pair<int, int>> path(static_cast<std::size_t>(std::max(frames, 0)), {dx, dy});
    if (!path.empty()) path.front() = {0, 0};
    return path;
}

std::vector<std::pair<int, int>> jittered_path(int frames, int dx, int dy, int amplitude, std::uint64_t seed) {
    auto path = linear_path(frames, dx, dy);
    std::mt19937_64 rng(seed);
    const auto span = static_cast<std::uint64_t>(2 * amplitude);
    for (std::size_t t = 1; t < path.size(); ++t) {
        path[t].first += static_cast<int>(uniform_draw(rng, 0, span)) - amplitude;
        path[t].second += static_cast<int>(uniform_draw(rng, 0, span)) - amplitude;
    }
    return path;
}

void center_path(MotionSpec& spec, int frame_w, int frame_h, int sprite_w, int sprite_h) {
    int x = 0, y = 0, min_x = 0, max_x = 0, min_y = 0, max_y = 0;
    for (const auto& [dx, dy] : spec.path) {
        x += dx;
        y += dy;
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
    }
    spec.start_x = (frame_w - sprite_w - (max_x - min_x)) / 2 - min_x;
    spec.start_y = (frame_h - sprite_h - (max_y - min_y)) / 2 - min_y;
}

SyntheticSequence generate_sequence(int frame_w, int frame_h, const PixelPatch& sprite, const MotionSpec& spec) {
    if (sprite.empty()) throw ConfigError("generate_sequence: sprite is empty");
    if (spec.path.empty()) throw ConfigError("generate_sequence: motion path is empty");
    if (!spec.scale_drift.empty() && spec.scale_drift.size() != spec.path.size()) {
        throw ConfigError("generate_sequence: scale_drift length differs from path length");
    }
    if (spec.noise_sigma < 0.0) throw ConfigError("generate_sequence: noise sigma must be >= 0");

    const Frame background = spec.background == Background::TexturedNoise
                                 ? value_noise_background(frame_w, frame_h, spec.seed)
                                 : [&] {
                                       Frame g(frame_w, frame_h, 1);
                                       for (int y = 0; y < frame_h; ++y)
                                           for (int x = 0; x < frame_w; ++x)
                                               g.at(x, y) = to_byte(255.0 * (x + y) / (frame_w + frame_h - 2.0));
                                       return g;
                                   }();

    SyntheticSequence seq;
    int x = spec.start_x, y = spec.start_y;
    for (std::size_t t = 0; t < spec.path.size(); ++t) {
        x += spec.path[t].first;
        y += spec.path[t].second;
        const double scale = spec.scale_drift.empty() ? 1.0 : spec.scale_drift[t];
        if (!(scale > 0.0)) throw ConfigError("generate_sequence: scale at step " + std::to_string(t) + " must be > 0");
        const int w = std::max(1, static_cast<int>(std::floor(scale * sprite.width() + 0.5)));
        const int h = std::max(1, static_cast<int>(std::floor(scale * sprite.height() + 0.5)));
        if (x < 0 || y < 0 || x + w > frame_w || y + h > frame_h) {
            throw RuntimeError("generate_sequence: sprite leaves the frame at step " + std::to_string(t));
        }
        const PixelPatch scaled = resize_sprite(sprite, w, h);

        Frame frame = background;
        for (int v = 0; v < h; ++v) {
            for (int u = 0; u < w; ++u) frame.at(x + u, y + v) = scaled.at(u, v);
        }
        if (spec.noise_sigma > 0.0) {
            std::mt19937_64 rng(spec.seed ^ (0x9e3779b97f4a7c15ULL * (t + 1)));
            std::normal_distribution<double> noise(0.0, spec.noise_sigma);
            for (auto& p : frame.values()) p = to_byte(p + noise(rng));
        }
        seq.frames.push_back(std::move(frame));
        seq.truth.push_back(BBox{x, y, w, h});
    }
    return seq;
}

}  // namespace mitfas
