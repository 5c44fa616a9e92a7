#include "mitfas/transforms.hpp"

#include "mitfas/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace mitfas {

namespace {

int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

bool is_integral(double v) { return std::floor(v) == v; }

std::string box_str(const BBox& b) {
    return "(" + std::to_string(b.x) + "," + std::to_string(b.y) + "," + std::to_string(b.w) + "," +
           std::to_string(b.h) + ")";
}

}  // namespace

Frame::Frame(int width, int height, int channels) : Frame(width, height, channels, {}) {}

Frame::Frame(int width, int height, int channels, std::vector<std::uint8_t> values)
    : width_(width), height_(height), channels_(channels), values_(std::move(values)) {
    if (width < 1 || height < 1) throw InputError("frame dimensions must be positive");
    if (channels != 1 && channels != 3) {
        throw InputError("unsupported channel count " + std::to_string(channels) + " (expected 1 or 3)");
    }
    const auto n = static_cast<std::size_t>(width) * height * channels;
    if (values_.empty()) values_.assign(n, 0);
    if (values_.size() != n) {
        throw InputError("frame holds " + std::to_string(values_.size()) + " bytes, expected " + std::to_string(n));
    }
}

void validate(const TransformParams& params) {
    if (!(params.scale > 0.0)) throw ConfigError("transform scale must be positive");
    if (!(params.theta > -std::numbers::pi && params.theta <= std::numbers::pi)) {
        throw ConfigError("transform theta must lie in (-pi, pi]");
    }
}

void validate_bbox(const BBox& box, int frame_width, int frame_height) {
    if (box.w <= 0 || box.h <= 0) throw InputError("bounding box " + box_str(box) + " has nonpositive size");
    if (box.x >= frame_width || box.y >= frame_height || box.x + box.w <= 0 || box.y + box.h <= 0) {
        throw InputError("bounding box " + box_str(box) + " does not intersect the " + std::to_string(frame_width) +
                         "x" + std::to_string(frame_height) + " frame");
    }
}

Rect clamp_to_frame(const Rect& r, int width, int height) {
    const double x0 = std::clamp(r.x, 0.0, static_cast<double>(width));
    const double y0 = std::clamp(r.y, 0.0, static_cast<double>(height));
    const double x1 = std::clamp(r.x + r.w, 0.0, static_cast<double>(width));
    const double y1 = std::clamp(r.y + r.h, 0.0, static_cast<double>(height));
    return Rect{x0, y0, std::max(0.0, x1 - x0), std::max(0.0, y1 - y0)};
}

Frame to_grayscale(const Frame& frame) {
    if (frame.channels() == 1) return frame;
    if (frame.channels() != 3) throw InputError("to_grayscale: unsupported channel count");
    Frame out(frame.width(), frame.height(), 1);
    const auto src = frame.values();
    auto dst = out.values();
    for (std::size_t p = 0; p < dst.size(); ++p) {
        const double luma = 0.299 * src[3 * p] + 0.587 * src[3 * p + 1] + 0.114 * src[3 * p + 2];
        dst[p] = static_cast<std::uint8_t>(std::clamp(round_half_up(luma), 0, 255));
    }
    return out;
}

std::pair<double, double> window_center(const TransformParams& params, int out_w, int out_h) {
    const double hx = params.scale * out_w / 2.0;
    const double hy = params.scale * out_h / 2.0;
    const double c = std::cos(params.theta), s = std::sin(params.theta);
    return {c * hx - s * hy + params.dx, s * hx + c * hy + params.dy};
}

void extract_patch_into(const Frame& frame, const TransformParams& params, int out_w, int out_h,
                        std::span<std::uint8_t> out) {
    const int fw = frame.width(), fh = frame.height();
    const auto src = frame.values();

    // Pure integer shift: straight copy with edge clamping.
    if (params.theta == 0.0 && params.scale == 1.0 && is_integral(params.dx) && is_integral(params.dy)) {
        const int ox = static_cast<int>(params.dx), oy = static_cast<int>(params.dy);
        const bool inside = ox >= 0 && oy >= 0 && ox + out_w <= fw && oy + out_h <= fh;
        for (int v = 0; v < out_h; ++v) {
            auto* row = out.data() + static_cast<std::size_t>(v) * out_w;
            if (inside) {
                const auto* s = src.data() + static_cast<std::size_t>(oy + v) * fw + ox;
                std::copy(s, s + out_w, row);
                continue;
            }
            const int sy = std::clamp(oy + v, 0, fh - 1);
            for (int u = 0; u < out_w; ++u) {
                row[u] = src[static_cast<std::size_t>(sy) * fw + std::clamp(ox + u, 0, fw - 1)];
            }
        }
        return;
    }

    const double c = std::cos(params.theta), s = std::sin(params.theta);
    const double max_x = fw - 1, max_y = fh - 1;
    for (int v = 0; v < out_h; ++v) {
        for (int u = 0; u < out_w; ++u) {
            const double lx = params.scale * u, ly = params.scale * v;
            const double sx = std::clamp(c * lx - s * ly + params.dx, 0.0, max_x);
            const double sy = std::clamp(s * lx + c * ly + params.dy, 0.0, max_y);
            const int x0 = static_cast<int>(std::floor(sx)), y0 = static_cast<int>(std::floor(sy));
            const int x1 = std::min(x0 + 1, fw - 1), y1 = std::min(y0 + 1, fh - 1);
            const double fx = sx - x0, fy = sy - y0;
            const auto px = [&](int x, int y) { return static_cast<double>(src[static_cast<std::size_t>(y) * fw + x]); };
            const double top = px(x0, y0) + fx * (px(x1, y0) - px(x0, y0));
            const double bottom = px(x0, y1) + fx * (px(x1, y1) - px(x0, y1));
            const double value = top + fy * (bottom - top);
            out[static_cast<std::size_t>(v) * out_w + u] = static_cast<std::uint8_t>(std::clamp(round_half_up(value), 0, 255));
        }
    }
}

PixelPatch extract_patch(const Frame& frame, const TransformParams& params, int out_w, int out_h) {
    if (!frame.is_gray()) throw InputError("extract_patch: frame must be grayscale");
    if (out_w < 1 || out_h < 1) throw ConfigError("extract_patch: output size must be positive");
    validate(params);
    const auto [cx, cy] = window_center(params, out_w, out_h);
    if (cx < 0.0 || cy < 0.0 || cx > frame.width() || cy > frame.height()) {
        throw RuntimeError("extract_patch: window center (" + std::to_string(cx) + ", " + std::to_string(cy) +
                           ") lies outside the frame");
    }
    PixelPatch patch(out_w, out_h);
    extract_patch_into(frame, params, out_w, out_h, patch.values());
    return patch;
}

BBox enlarge_reference_box(const BBox& bbox) {
    const int w = std::max(1, round_half_up(1.10 * bbox.w));
    const int h = std::max(1, round_half_up(1.25 * bbox.h));
    const int left = (w - bbox.w) / 2;
    const int top = std::min(round_half_up(0.20 * bbox.h), h - bbox.h);
    return BBox{bbox.x - left, bbox.y - top, w, h};
}

ReferenceSpec make_reference(const Frame& frame, const BBox& bbox, std::size_t frame_index) {
    if (!frame.is_gray()) throw InputError("make_reference: frame must be grayscale");
    validate_bbox(bbox, frame.width(), frame.height());
    const BBox big = enlarge_reference_box(bbox);
    const int x0 = std::max(0, big.x), y0 = std::max(0, big.y);
    const int x1 = std::min(frame.width(), big.x + big.w), y1 = std::min(frame.height(), big.y + big.h);
    if (x1 <= x0 || y1 <= y0) {
        throw RuntimeError("make_reference: enlarged box " + box_str(big) + " is empty after clamping");
    }
    ReferenceSpec ref;
    ref.origin_params = TransformParams{0.0, static_cast<double>(x0), static_cast<double>(y0), 1.0};
    ref.enlarged_box = BBox{x0, y0, x1 - x0, y1 - y0};
    ref.source_frame_index = frame_index;
    ref.patch = extract_patch(frame, ref.origin_params, x1 - x0, y1 - y0);
    return ref;
}

}  // namespace mitfas
