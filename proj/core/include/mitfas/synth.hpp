#pragma once

#include "mitfas/transforms.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace mitfas {

enum class Background { TexturedNoise, Gradient };

/// Sprite motion for a synthetic sequence. The sprite's top-left corner at
/// frame t is start + Σ_{k<=t} path[k]; its size is round(scale[t] * sprite).
struct MotionSpec {
    int start_x = 0;
    int start_y = 0;
    std::vector<std::pair<int, int>> path;
    std::vector<double> scale_drift;  // empty = 1.0 for every frame
    Background background = Background::TexturedNoise;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
};

struct SyntheticSequence {
    std::vector<Frame> frames;
    std::vector<BBox> truth;  // exact sprite box per frame
};

SyntheticSequence generate_sequence(int frame_w, int frame_h, const PixelPatch& sprite, const MotionSpec& spec);

/// Seeded sprite of Voronoi panels (about 10 px across) with fixed per-pixel grain.
PixelPatch make_sprite(int width, int height, std::uint64_t seed);

/// Seeded value noise summed over two octaves (cell sizes 32 and 8), in [0, 255].
Frame value_noise_background(int width, int height, std::uint64_t seed);

/// `frames` steps of constant (dx, dy); path[0] is (0, 0).
std::vector<std::pair<int, int>> linear_path(int frames, int dx, int dy);

/// Constant drift plus a seeded per-step jitter in [-amplitude, amplitude].
std::vector<std::pair<int, int>> jittered_path(int frames, int dx, int dy, int amplitude, std::uint64_t seed);

/// Picks start_x/start_y so the whole path stays centred in the frame.
void center_path(MotionSpec& spec, int frame_w, int frame_h, int sprite_w, int sprite_h);

}  // namespace mitfas
