#pragma once

#include "mitfas/mi_core.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace mitfas {

double euclidean_distance(const PixelPatch& a, const PixelPatch& b);
double cosine_similarity(const PixelPatch& a, const PixelPatch& b);
/// Peak signal-to-noise ratio in dB; +infinity for identical patches.
double psnr(const PixelPatch& a, const PixelPatch& b);

inline constexpr int kSsimWindow = 8;
/// Mean SSIM over every 8x8 window (step 1, uniform weights).
double ssim(const PixelPatch& a, const PixelPatch& b);

enum class Measure { MutualInformation, Euclidean, Cosine, Psnr, Ssim };

enum class Polarity { Maximize, Minimize };

Polarity polarity_of(Measure m) noexcept;
std::string_view measure_name(Measure m) noexcept;
std::optional<Measure> parse_measure(std::string_view name) noexcept;

/// Evaluates `m` on (a, b); MI uses `bins`.
double evaluate_measure(Measure m, const PixelPatch& a, const PixelPatch& b, int bins = kDefaultBins);

/// Folds polarity so that larger is always better.
inline double oriented(Measure m, double value) noexcept {
    return polarity_of(m) == Polarity::Maximize ? value : -value;
}

}  // namespace mitfas
