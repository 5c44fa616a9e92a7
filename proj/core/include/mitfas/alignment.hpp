#pragma once

#include "mitfas/similarity.hpp"
#include "mitfas/transforms.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace mitfas {

struct SearchConfig {
    int stride = 10;
    std::vector<double> scale_set{0.9, 1.0, 1.1};
    std::vector<double> theta_set{0.0};
    double search_expansion = 1.25;
    int bins = kDefaultBins;
    int relocalize_every = 16;  // 0 disables the cadence trigger
    double relocalize_mi_floor = 0.5;
    Measure measure = Measure::MutualInformation;
    int threads = 1;  // 0 = all hardware threads

    friend bool operator==(const SearchConfig&, const SearchConfig&) = default;
};

void validate(const SearchConfig& config);

struct SearchResult {
    TransformParams params;
    double score = 0.0;  // raw measure value (bits for MI)
};

/// Exhaustive search of the discrete grid inside `search_area`: integer window
/// placements at `stride` whose unrotated window lies inside the area, crossed
/// with every scale and angle. Returns the best placement under the measure's
/// polarity. Ties go to the placement closest to the area center, then the
/// scale closest to 1, then the smallest |theta|, then the smallest (dx, dy).
SearchResult search_best_window(const Frame& frame, const PixelPatch& reference, const Rect& search_area,
                                const SearchConfig& config);

inline SearchResult search_best_window(const Frame& frame, const ReferenceSpec& reference, const Rect& search_area,
                                       const SearchConfig& config) {
    return search_best_window(frame, reference.patch, search_area, config);
}

/// Window placed by `prev` (for a ref_w x ref_h reference) grown about its
/// center by `expansion` and clamped to the frame.
Rect propagate_search_area(const TransformParams& prev, int ref_w, int ref_h, double expansion, int frame_w,
                           int frame_h);

struct AlignmentRecord {
    std::size_t frame_index = 0;
    TransformParams params;
    double score = 0.0;
    Rect search_area;
    bool relocalized = false;

    friend bool operator==(const AlignmentRecord&, const AlignmentRecord&) = default;
};

using AlignmentTrace = std::vector<AlignmentRecord>;

/// Optional localization hook: may return a fresh box for a frame.
using Detector = std::function<std::optional<BBox>(const Frame& frame, std::size_t frame_index)>;

struct AlignmentResult {
    AlignmentTrace trace;
    std::vector<PixelPatch> patches;
    ReferenceSpec reference;  // built from frame 0
};

/// Tracks the seeded actor through `frames`. Each aligned patch becomes the
/// reference for the next frame; relocalization steps search against the
/// frame-0 reference, inside the detector's box when one is available and over
/// the whole frame otherwise.
AlignmentResult align_sequence(const std::vector<Frame>& frames, const BBox& seed_bbox, const SearchConfig& config,
                               const Detector& detector = {});

}  // namespace mitfas
