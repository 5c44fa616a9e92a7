#pragma once

#include "mitfas/mi_core.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace mitfas {

/// Raw 8-bit frame, row-major, channel-interleaved (1 = gray, 3 = RGB).
class Frame {
public:
    Frame() = default;
    Frame(int width, int height, int channels);
    Frame(int width, int height, int channels, std::vector<std::uint8_t> values);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int channels() const noexcept { return channels_; }
    bool is_gray() const noexcept { return channels_ == 1; }

    std::uint8_t at(int x, int y, int c = 0) const {
        return values_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }
    std::uint8_t& at(int x, int y, int c = 0) {
        return values_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }

    std::span<const std::uint8_t> values() const noexcept { return values_; }
    std::span<std::uint8_t> values() noexcept { return values_; }

    friend bool operator==(const Frame&, const Frame&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    int channels_ = 0;
    std::vector<std::uint8_t> values_;
};

/// Parameters of the region-extraction operation: rotation, displacement of the
/// window origin in frame pixels (dx horizontal, dy vertical), and the ratio of
/// the extracted window size to the output size.
struct TransformParams {
    double theta = 0.0;
    double dx = 0.0;
    double dy = 0.0;
    double scale = 1.0;

    friend bool operator==(const TransformParams&, const TransformParams&) = default;
};

void validate(const TransformParams& params);

/// Axis-aligned box in integer frame pixels; (x, y) is the top-left corner.
struct BBox {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    friend bool operator==(const BBox&, const BBox&) = default;
};

/// Checks w, h > 0 and that the box overlaps the frame.
void validate_bbox(const BBox& box, int frame_width, int frame_height);

/// Axis-aligned rectangle with real-valued extent.
struct Rect {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;

    double center_x() const noexcept { return x + w / 2.0; }
    double center_y() const noexcept { return y + h / 2.0; }
    friend bool operator==(const Rect&, const Rect&) = default;
};

/// Intersection of `r` with [0, width] x [0, height]; zero-size when disjoint.
Rect clamp_to_frame(const Rect& r, int width, int height);

struct ReferenceSpec {
    PixelPatch patch;
    TransformParams origin_params;
    std::size_t source_frame_index = 0;
    BBox enlarged_box;  // after clamping to the frame
};

/// BT.601 luma; gray frames are returned unchanged.
Frame to_grayscale(const Frame& frame);

/// Samples an out_w x out_h patch. Output pixel (u, v) reads the frame at
/// R(theta)·(scale·u, scale·v) + (dx, dy) with bilinear interpolation and
/// clamp-to-edge, rounded to the nearest intensity.
PixelPatch extract_patch(const Frame& frame, const TransformParams& params, int out_w, int out_h);

/// Same as extract_patch but writes into `out` (size out_w * out_h) without
/// the center-in-frame check. Used by the search inner loop.
void extract_patch_into(const Frame& frame, const TransformParams& params, int out_w, int out_h,
                        std::span<std::uint8_t> out);

/// Enlarges `bbox` by 10% horizontally (split evenly) and 25% vertically
/// (15% margin on top plus 10% split evenly), before clamping to the frame.
BBox enlarge_reference_box(const BBox& bbox);

ReferenceSpec make_reference(const Frame& frame, const BBox& bbox, std::size_t frame_index = 0);

/// Center of the window placed by `params` for an out_w x out_h output.
std::pair<double, double> window_center(const TransformParams& params, int out_w, int out_h);

}  // namespace mitfas
