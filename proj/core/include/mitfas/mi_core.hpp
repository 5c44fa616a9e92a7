#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mitfas {

inline constexpr int kDefaultBins = 128;
inline constexpr int kMinBins = 2;
inline constexpr int kMaxBins = 256;

/// Fixed-size grid of 8-bit intensities, row-major.
class PixelPatch {
public:
    PixelPatch() = default;
    PixelPatch(int width, int height);
    PixelPatch(int width, int height, std::vector<std::uint8_t> values);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    std::uint8_t at(int x, int y) const { return values_[static_cast<std::size_t>(y) * width_ + x]; }
    std::uint8_t& at(int x, int y) { return values_[static_cast<std::size_t>(y) * width_ + x]; }

    std::span<const std::uint8_t> values() const noexcept { return values_; }
    std::span<std::uint8_t> values() noexcept { return values_; }

    bool same_shape(const PixelPatch& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

    friend bool operator==(const PixelPatch&, const PixelPatch&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> values_;
};

/// B x B table of co-located bin pairs. counts[i * bins + j] counts pixels whose
/// first-patch value falls in bin i and second-patch value in bin j.
struct JointHistogram {
    int bins = 0;
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    std::uint64_t at(int i, int j) const { return counts[static_cast<std::size_t>(i) * bins + j]; }
};

/// Normalized joint distribution and its two marginals.
struct PmfPair {
    int bins = 0;
    std::vector<double> joint;  // row-major, bins x bins
    std::vector<double> marginal_v;
    std::vector<double> marginal_z;

    double at(int i, int j) const { return joint[static_cast<std::size_t>(i) * bins + j]; }
};

/// Equal-width bin index of an 8-bit intensity: floor(v * bins / 256).
constexpr int bin_of(std::uint8_t value, int bins) noexcept { return (static_cast<int>(value) * bins) >> 8; }

void check_bins(int bins);

JointHistogram build_joint_histogram(const PixelPatch& a, const PixelPatch& b, int bins = kDefaultBins);
PmfPair pmfs_from_histogram(const JointHistogram& h);

/// Shannon entropy in bits; 0·log 0 is taken as 0.
double entropy(std::span<const double> pmf);
/// Entropy of a flattened joint distribution, in bits.
double joint_entropy(std::span<const double> joint);

/// Histogram mutual information in bits, clamped at zero.
double mutual_information(const PixelPatch& a, const PixelPatch& b, int bins = kDefaultBins);

/// Mean of pairwise MI between each sampled patch and the candidate.
double joint_mi_approx(std::span<const PixelPatch> sampled, const PixelPatch& candidate, int bins = kDefaultBins);

/// Largest joint-table cell count accepted by joint_mi_exact (bins^(k+1)).
inline constexpr std::uint64_t kExactJointCellLimit = std::uint64_t{1} << 20;

/// I(F_0..F_k ; candidate) from the full (k+2)-dimensional histogram of
/// co-located pixel tuples. Intended as a reference, not for inner loops.
double joint_mi_exact(std::span<const PixelPatch> sampled, const PixelPatch& candidate, int bins = kDefaultBins);

/// Reusable MI scorer against a fixed reference patch.
///
/// Holds the reference bin codes, its marginal and a c·log2(c) table, so each
/// evaluation is linear in the patch size rather than in bins². Results are
/// bit-identical to mutual_information(candidate, reference, bins).
/// Not thread-safe; give each worker its own copy.
class MiEvaluator {
public:
    MiEvaluator(const PixelPatch& reference, int bins = kDefaultBins);

    int bins() const noexcept { return bins_; }
    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    /// MI between `candidate` (same shape as the reference) and the reference.
    double operator()(std::span<const std::uint8_t> candidate);

    /// Same value for a window read straight out of a pre-binned image:
    /// `codes[y * pitch + x]` holds bin_of(v) * bins (see premultiplied_bins).
    double evaluate_binned(const std::uint16_t* codes, std::size_t pitch);

private:
    int bins_;
    int width_;
    int height_;
    std::vector<std::uint16_t> ref_codes_;
    std::vector<std::uint64_t> ref_marginal_;
    std::vector<double> xlogx_;
    std::vector<std::uint32_t> cells_;
    std::vector<std::uint32_t> touched_;
    std::vector<std::uint64_t> cand_marginal_;
    std::vector<std::uint32_t> count_freq_;
    std::vector<std::uint16_t> row_of_;  // cell -> candidate bin
    double sz_ = 0.0;

    double finish(std::size_t used);  // MI from the first `used` touched cells; clears them
};

/// bin_of(v) * bins for every pixel value, row-major.
std::vector<std::uint16_t> premultiplied_bins(std::span<const std::uint8_t> values, int bins);

namespace detail {

/// c·log2(c) for c = 0..n.
std::vector<double> xlogx_table(std::uint64_t n);

/// Order-independent Σ c·log2 c over a multiset of counts given as a
/// frequency table: freq[c] = number of cells holding count c.
double sum_xlogx_from_freq(std::span<const std::uint32_t> freq, std::span<const double> xlogx);

/// Assembles MI from the three count sums; `xlogx` must cover `total`.
double mi_from_sums(double joint_sum, double marginal_sum_v, double marginal_sum_z, std::uint64_t total,
                    std::span<const double> xlogx);

}  // namespace detail

}  // namespace mitfas
