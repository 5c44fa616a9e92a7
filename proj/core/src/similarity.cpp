#include "mitfas/similarity.hpp"

#include "mitfas/error.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>
#include <limits>

namespace mitfas {

namespace {

void check_shapes(const PixelPatch& a, const PixelPatch& b, const char* op) {
    if (!a.same_shape(b) || a.empty()) {
        throw ConfigError(std::string(op) + ": patch dimension mismatch " + std::to_string(a.width()) + "x" +
                          std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                          std::to_string(b.height()));
    }
}

double sum_squared_diff(const PixelPatch& a, const PixelPatch& b) {
    double s = 0.0;
    for (std::size_t p = 0; p < a.size(); ++p) {
        const double d = static_cast<double>(a.values()[p]) - static_cast<double>(b.values()[p]);
        s += d * d;
    }
    return s;
}

}  // namespace

double euclidean_distance(const PixelPatch& a, const PixelPatch& b) {
    check_shapes(a, b, "euclidean_distance");
    return std::sqrt(sum_squared_diff(a, b));
}

double cosine_similarity(const PixelPatch& a, const PixelPatch& b) {
    check_shapes(a, b, "cosine_similarity");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t p = 0; p < a.size(); ++p) {
        const double x = a.values()[p], y = b.values()[p];
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if (na == 0.0 || nb == 0.0) throw RuntimeError("cosine_similarity: undefined for an all-zero patch");
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

double psnr(const PixelPatch& a, const PixelPatch& b) {
    check_shapes(a, b, "psnr");
    const double mse = sum_squared_diff(a, b) / static_cast<double>(a.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double ssim(const PixelPatch& a, const PixelPatch& b) {
    check_shapes(a, b, "ssim");
    if (a.width() < kSsimWindow || a.height() < kSsimWindow) {
        throw ConfigError("ssim: patches must be at least 8x8");
    }
    constexpr double c1 = (0.01 * 255) * (0.01 * 255);
    constexpr double c2 = (0.03 * 255) * (0.03 * 255);
    constexpr double n = kSsimWindow * kSsimWindow;

    // Integer summed-area tables of a, b, a², b², ab; window sums are exact.
    const int w = a.width(), h = a.height();
    const std::size_t stride = static_cast<std::size_t>(w) + 1;
    std::array<std::vector<std::int64_t>, 5> sat;
    for (auto& t : sat) t.assign(stride * (h + 1), 0);
    for (int y = 0; y < h; ++y) {
        std::array<std::int64_t, 5> row{};
        for (int x = 0; x < w; ++x) {
            const std::int64_t va = a.at(x, y), vb = b.at(x, y);
            const std::array<std::int64_t, 5> v{va, vb, va * va, vb * vb, va * vb};
            for (int k = 0; k < 5; ++k) {
                row[k] += v[k];
                sat[k][(y + 1) * stride + x + 1] = sat[k][y * stride + x + 1] + row[k];
            }
        }
    }
    const auto window_sum = [&](int k, int x, int y) {
        const auto& t = sat[k];
        const std::size_t x1 = x + kSsimWindow, y1 = y + kSsimWindow;
        return static_cast<double>(t[y1 * stride + x1] - t[y * stride + x1] - t[y1 * stride + x] + t[y * stride + x]);
    };

    double total = 0.0;
    long windows = 0;
    for (int y = 0; y + kSsimWindow <= h; ++y) {
        for (int x = 0; x + kSsimWindow <= w; ++x) {
            const double ma = window_sum(0, x, y) / n, mb = window_sum(1, x, y) / n;
            const double var_a = window_sum(2, x, y) / n - ma * ma;
            const double var_b = window_sum(3, x, y) / n - mb * mb;
            const double cov = window_sum(4, x, y) / n - ma * mb;
            total += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (var_a + var_b + c2));
            ++windows;
        }
    }
    return total / static_cast<double>(windows);
}

Polarity polarity_of(Measure m) noexcept {
    return m == Measure::Euclidean ? Polarity::Minimize : Polarity::Maximize;
}

std::string_view measure_name(Measure m) noexcept {
    switch (m) {
        case Measure::MutualInformation: return "mi";
        case Measure::Euclidean: return "euclidean";
        case Measure::Cosine: return "cosine";
        case Measure::Psnr: return "psnr";
        case Measure::Ssim: return "ssim";
    }
    return "mi";
}

std::optional<Measure> parse_measure(std::string_view name) noexcept {
    for (Measure m : {Measure::MutualInformation, Measure::Euclidean, Measure::Cosine, Measure::Psnr, Measure::Ssim}) {
        if (measure_name(m) == name) return m;
    }
    return std::nullopt;
}

double evaluate_measure(Measure m, const PixelPatch& a, const PixelPatch& b, int bins) {
    switch (m) {
        case Measure::MutualInformation: return mutual_information(a, b, bins);
        case Measure::Euclidean: return euclidean_distance(a, b);
        case Measure::Cosine: return cosine_similarity(a, b);
        case Measure::Psnr: return psnr(a, b);
        case Measure::Ssim: return ssim(a, b);
    }
    return 0.0;
}

}  // namespace mitfas
