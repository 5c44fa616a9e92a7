#include "mitfas/alignment.hpp"

#include "mitfas/error.hpp"
#include "mitfas/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mitfas {

namespace {

constexpr double kGridEps = 1e-9;

std::string rect_str(const Rect& r) {
    return "[x=" + std::to_string(r.x) + ", y=" + std::to_string(r.y) + ", w=" + std::to_string(r.w) +
           ", h=" + std::to_string(r.h) + "]";
}

struct Candidate {
    TransformParams params;
    double dist2 = 0.0;  // squared distance of the window center from the area center
    double value = 0.0;  // raw measure value
    double key = 0.0;    // polarity-folded value, larger is better
};

// Strict "a is preferred over b" ordering; total on distinct candidates.
bool better(const Candidate& a, const Candidate& b) {
    if (a.key != b.key) return a.key > b.key;
    if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
    const double sa = std::abs(a.params.scale - 1.0), sb = std::abs(b.params.scale - 1.0);
    if (sa != sb) return sa < sb;
    const double ta = std::abs(a.params.theta), tb = std::abs(b.params.theta);
    if (ta != tb) return ta < tb;
    if (a.params.dx != b.params.dx) return a.params.dx < b.params.dx;
    if (a.params.dy != b.params.dy) return a.params.dy < b.params.dy;
    if (a.params.scale != b.params.scale) return a.params.scale < b.params.scale;
    return a.params.theta < b.params.theta;
}

std::vector<Candidate> enumerate_grid(const Rect& area, int ref_w, int ref_h, const SearchConfig& config) {
    std::vector<Candidate> grid;
    const double acx = area.center_x(), acy = area.center_y();
    for (double scale : config.scale_set) {
        const double win_w = scale * ref_w, win_h = scale * ref_h;
        const int x_first = static_cast<int>(std::ceil(area.x - kGridEps));
        const int y_first = static_cast<int>(std::ceil(area.y - kGridEps));
        for (double theta : config.theta_set) {
            const double c = std::cos(theta), s = std::sin(theta);
            const double hx = win_w / 2.0, hy = win_h / 2.0;
            for (int y = y_first; y + win_h <= area.y + area.h + kGridEps; y += config.stride) {
                for (int x = x_first; x + win_w <= area.x + area.w + kGridEps; x += config.stride) {
                    // Window center stays put under rotation; recover the origin from it.
                    const double cx = x + hx, cy = y + hy;
                    Candidate cand;
                    cand.params.scale = scale;
                    cand.params.theta = theta;
                    if (theta == 0.0) {
                        cand.params.dx = x;
                        cand.params.dy = y;
                    } else {
                        cand.params.dx = cx - (c * hx - s * hy);
                        cand.params.dy = cy - (s * hx + c * hy);
                    }
                    cand.dist2 = (cx - acx) * (cx - acx) + (cy - acy) * (cy - acy);
                    grid.push_back(cand);
                }
            }
        }
    }
    return grid;
}

double score_placement(const Frame& frame, const PixelPatch& reference, const TransformParams& params,
                       const SearchConfig& config, MiEvaluator* mi, std::vector<std::uint8_t>& buffer) {
    const int w = reference.width(), h = reference.height();
    extract_patch_into(frame, params, w, h, buffer);
    if (config.measure == Measure::MutualInformation) return (*mi)(buffer);
    const PixelPatch patch(w, h, buffer);
    try {
        return evaluate_measure(config.measure, patch, reference, config.bins);
    } catch (const RuntimeError&) {
        // Undefined similarity (all-zero window under cosine) ranks last.
        return polarity_of(config.measure) == Polarity::Maximize ? -std::numeric_limits<double>::infinity()
                                                                  : std::numeric_limits<double>::infinity();
    }
}

Rect detector_area(const BBox& box, int ref_w, int ref_h, double expansion, int frame_w, int frame_h) {
    const BBox big = enlarge_reference_box(box);
    const double w = expansion * std::max(big.w, ref_w);
    const double h = expansion * std::max(big.h, ref_h);
    const double cx = big.x + big.w / 2.0, cy = big.y + big.h / 2.0;
    return clamp_to_frame(Rect{cx - w / 2.0, cy - h / 2.0, w, h}, frame_w, frame_h);
}

}  // namespace

void validate(const SearchConfig& config) {
    if (config.stride < 1) throw ConfigError("stride must be >= 1");
    if (config.scale_set.empty()) throw ConfigError("scale set must not be empty");
    for (double s : config.scale_set) {
        if (!(s > 0.0)) throw ConfigError("scales must be positive");
    }
    if (config.theta_set.empty()) throw ConfigError("theta set must not be empty");
    for (double t : config.theta_set) validate(TransformParams{t, 0.0, 0.0, 1.0});
    if (!(config.search_expansion >= 1.0)) throw ConfigError("search expansion must be >= 1");
    check_bins(config.bins);
    if (config.relocalize_every < 0) throw ConfigError("relocalize_every must be >= 0");
    if (!(config.relocalize_mi_floor >= 0.0)) throw ConfigError("relocalize_mi_floor must be >= 0");
    if (config.threads < 0) throw ConfigError("threads must be >= 0");
}

SearchResult search_best_window(const Frame& frame, const PixelPatch& reference, const Rect& search_area,
                                const SearchConfig& config) {
    validate(config);
    if (!frame.is_gray()) throw InputError("search_best_window: frame must be grayscale");
    if (reference.empty()) throw ConfigError("search_best_window: reference patch is empty");

    const Rect area = clamp_to_frame(search_area, frame.width(), frame.height());
    std::vector<Candidate> grid = enumerate_grid(area, reference.width(), reference.height(), config);
    if (grid.empty()) throw RuntimeError("search failure: no window fits in search area " + rect_str(search_area));

    const int threads = resolve_thread_count(config.threads);
    const int workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads), grid.size()));
    std::vector<Candidate> best(static_cast<std::size_t>(std::max(workers, 1)));
    std::vector<char> has_best(best.size(), 0);

    // Unscaled, unrotated windows sit on whole pixels inside the frame, so MI
    // can read them from one pre-binned copy of the frame.
    const bool mi_measure = config.measure == Measure::MutualInformation;
    const auto is_plain = [](const Candidate& c) { return c.params.scale == 1.0 && c.params.theta == 0.0; };
    std::vector<std::uint16_t> codes;
    if (mi_measure && std::any_of(grid.begin(), grid.end(), is_plain)) {
        codes = premultiplied_bins(frame.values(), config.bins);
    }
    const auto pitch = static_cast<std::size_t>(frame.width());

    parallel_chunks(grid.size(), workers, [&](std::size_t begin, std::size_t end, int worker) {
        std::optional<MiEvaluator> mi;
        if (config.measure == Measure::MutualInformation) mi.emplace(reference, config.bins);
        std::vector<std::uint8_t> buffer(reference.size());
        for (std::size_t i = begin; i < end; ++i) {
            Candidate& cand = grid[i];
            if (mi_measure && is_plain(cand)) {
                const auto x = static_cast<std::size_t>(cand.params.dx), y = static_cast<std::size_t>(cand.params.dy);
                cand.value = mi->evaluate_binned(codes.data() + y * pitch + x, pitch);
            } else {
                cand.value = score_placement(frame, reference, cand.params, config, mi ? &*mi : nullptr, buffer);
            }
            cand.key = oriented(config.measure, cand.value);
            if (!has_best[worker] || better(cand, best[worker])) {
                best[worker] = cand;
                has_best[worker] = 1;
            }
        }
    });

    const Candidate* winner = nullptr;
    for (std::size_t w = 0; w < best.size(); ++w) {
        if (has_best[w] && (!winner || better(best[w], *winner))) winner = &best[w];
    }
    return SearchResult{winner->params, winner->value};
}

Rect propagate_search_area(const TransformParams& prev, int ref_w, int ref_h, double expansion, int frame_w,
                           int frame_h) {
    if (!(expansion >= 1.0)) throw ConfigError("search expansion must be >= 1");
    const auto [cx, cy] = window_center(prev, ref_w, ref_h);
    const double w = expansion * prev.scale * ref_w;
    const double h = expansion * prev.scale * ref_h;
    return clamp_to_frame(Rect{cx - w / 2.0, cy - h / 2.0, w, h}, frame_w, frame_h);
}

AlignmentResult align_sequence(const std::vector<Frame>& frames, const BBox& seed_bbox, const SearchConfig& config,
                               const Detector& detector) {
    validate(config);
    if (frames.empty()) throw InputError("align_sequence: no frames");
    const int fw = frames.front().width(), fh = frames.front().height();
    for (std::size_t t = 1; t < frames.size(); ++t) {
        if (frames[t].width() != fw || frames[t].height() != fh) {
            throw InputError("align_sequence: frame " + std::to_string(t) + " differs in size from frame 0");
        }
    }
    const auto gray = [&](std::size_t t) { return frames[t].is_gray() ? frames[t] : to_grayscale(frames[t]); };

    AlignmentResult result;
    const Frame first = gray(0);
    result.reference = make_reference(first, seed_bbox, 0);
    const PixelPatch& anchor = result.reference.patch;
    const int rw = anchor.width(), rh = anchor.height();
    const bool use_floor = config.measure == Measure::MutualInformation;

    result.trace.reserve(frames.size());
    result.patches.reserve(frames.size());
    result.trace.push_back(AlignmentRecord{0, result.reference.origin_params,
                                           evaluate_measure(config.measure, anchor, anchor, config.bins),
                                           Rect{result.reference.origin_params.dx, result.reference.origin_params.dy,
                                                static_cast<double>(rw), static_cast<double>(rh)},
                                           false});
    result.patches.push_back(anchor);

    std::vector<double> segment;  // scores since the last relocalization
    for (std::size_t t = 1; t < frames.size(); ++t) {
        const Frame frame = gray(t);
        const TransformParams& prev = result.trace.back().params;
        const bool due = config.relocalize_every > 0 && t % static_cast<std::size_t>(config.relocalize_every) == 0;

        AlignmentRecord rec;
        rec.frame_index = t;
        SearchResult found;
        bool relocalize = due;
        try {
            if (!due) {
                rec.search_area = propagate_search_area(prev, rw, rh, config.search_expansion, fw, fh);
                found = search_best_window(frame, result.patches.back(), rec.search_area, config);
                if (use_floor && !segment.empty()) {
                    double mean = 0.0;
                    for (double s : segment) mean += s;
                    mean /= static_cast<double>(segment.size());
                    relocalize = found.score < config.relocalize_mi_floor * mean;
                }
            }
            if (relocalize) {
                std::optional<BBox> box;
                if (detector) {
                    try {
                        box = detector(frame, t);
                    } catch (const Error& e) {
                        throw_error(e.kind(), "detector failed at frame " + std::to_string(t) + ": " + e.what());
                    } catch (const std::exception& e) {
                        throw RuntimeError("detector failed at frame " + std::to_string(t) + ": " + e.what());
                    }
                }
                if (box) validate_bbox(*box, fw, fh);
                rec.search_area = box ? detector_area(*box, rw, rh, config.search_expansion, fw, fh)
                                      : Rect{0.0, 0.0, static_cast<double>(fw), static_cast<double>(fh)};
                found = search_best_window(frame, anchor, rec.search_area, config);
                rec.relocalized = true;
                segment.clear();
            } else {
                segment.push_back(found.score);
            }
        } catch (const Error& e) {
            if (std::string(e.what()).rfind("detector failed", 0) == 0) throw;
            throw_error(e.kind(), "alignment failed at frame " + std::to_string(t) + ": " + e.what());
        }
        rec.params = found.params;
        rec.score = found.score;
        result.patches.push_back(extract_patch(frame, found.params, rw, rh));
        result.trace.push_back(rec);
    }
    return result;
}

}  // namespace mitfas
