#pragma once

#include "mitfas/transforms.hpp"

#include <filesystem>

namespace mitfas {

/// Decodes a binary PGM (P5), binary PPM (P6) or PNG file. PNGs with alpha or
/// palettes are flattened to gray or RGB.
Frame read_image(const std::filesystem::path& path);

void write_pgm(const std::filesystem::path& path, const PixelPatch& patch);
void write_pgm(const std::filesystem::path& path, const Frame& frame);  // P5 or P6 by channel count
void write_png(const std::filesystem::path& path, const PixelPatch& patch);

enum class PatchFormat { Pgm, Png };

void write_patch(const std::filesystem::path& path, const PixelPatch& patch, PatchFormat format);
const char* patch_extension(PatchFormat format) noexcept;

}  // namespace mitfas
