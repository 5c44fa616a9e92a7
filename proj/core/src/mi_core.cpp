#include "mitfas/mi_core.hpp"

#include "mitfas/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace mitfas {

namespace {

constexpr double kNormTolerance = 1e-9;

std::string shape_str(const PixelPatch& p) {
    return std::to_string(p.width()) + "x" + std::to_string(p.height());
}

void check_same_shape(const PixelPatch& a, const PixelPatch& b) {
    if (!a.same_shape(b)) {
        throw ConfigError("patch dimension mismatch: " + shape_str(a) + " vs " + shape_str(b));
    }
    if (a.empty()) throw ConfigError("patches must be nonempty");
}

void check_normalized(std::span<const double> pmf) {
    double sum = 0.0;
    for (double p : pmf) {
        if (!(p >= 0.0)) throw ConfigError("invalid distribution: negative or NaN probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kNormTolerance) {
        throw ConfigError("invalid distribution: probabilities sum to " + std::to_string(sum));
    }
}

double shannon_bits(std::span<const double> pmf) {
    double h = 0.0;
    for (double p : pmf) {
        if (p > 0.0) h -= p * std::log2(p);
    }
    return std::max(h, 0.0);
}

// Σ c·log2 c over the nonzero counts of a table, independent of traversal order.
template <typename Count>
double sum_xlogx(std::span<const Count> counts, std::span<const double> xlogx, std::vector<std::uint32_t>& freq) {
    freq.assign(xlogx.size(), 0);
    for (Count c : counts) {
        if (c != 0) ++freq[static_cast<std::size_t>(c)];
    }
    return detail::sum_xlogx_from_freq(freq, xlogx);
}

double entropy_of_counts(std::span<const std::uint32_t> counts, std::uint64_t total, std::span<const double> xlogx,
                         std::vector<std::uint32_t>& freq) {
    const double s = sum_xlogx(counts, xlogx, freq);
    const double n = static_cast<double>(total);
    return std::max(std::log2(n) - s / n, 0.0);
}

}  // namespace

PixelPatch::PixelPatch(int width, int height) : PixelPatch(width, height, {}) {}

PixelPatch::PixelPatch(int width, int height, std::vector<std::uint8_t> values)
    : width_(width), height_(height), values_(std::move(values)) {
    if (width < 1 || height < 1) {
        throw ConfigError("patch dimensions must be positive, got " + std::to_string(width) + "x" +
                          std::to_string(height));
    }
    const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (values_.empty()) values_.assign(n, 0);
    if (values_.size() != n) {
        throw ConfigError("patch holds " + std::to_string(values_.size()) + " values, expected " + std::to_string(n));
    }
}

void check_bins(int bins) {
    if (bins < kMinBins || bins > kMaxBins) {
        throw ConfigError("bins must be in [2, 256], got " + std::to_string(bins));
    }
}

JointHistogram build_joint_histogram(const PixelPatch& a, const PixelPatch& b, int bins) {
    check_bins(bins);
    check_same_shape(a, b);
    JointHistogram h;
    h.bins = bins;
    h.counts.assign(static_cast<std::size_t>(bins) * bins, 0);
    const auto va = a.values();
    const auto vb = b.values();
    for (std::size_t p = 0; p < va.size(); ++p) {
        ++h.counts[static_cast<std::size_t>(bin_of(va[p], bins)) * bins + bin_of(vb[p], bins)];
    }
    h.total = va.size();
    return h;
}

PmfPair pmfs_from_histogram(const JointHistogram& h) {
    if (h.total == 0) throw RuntimeError("empty histogram: no pixel pairs to normalize");
    const int bins = h.bins;
    PmfPair pmf;
    pmf.bins = bins;
    pmf.joint.resize(h.counts.size());
    pmf.marginal_v.assign(bins, 0.0);
    pmf.marginal_z.assign(bins, 0.0);
    const double total = static_cast<double>(h.total);
    for (int i = 0; i < bins; ++i) {
        for (int j = 0; j < bins; ++j) {
            const double p = static_cast<double>(h.at(i, j)) / total;
            pmf.joint[static_cast<std::size_t>(i) * bins + j] = p;
            pmf.marginal_v[i] += p;
            pmf.marginal_z[j] += p;
        }
    }
    return pmf;
}

double entropy(std::span<const double> pmf) {
    check_normalized(pmf);
    return shannon_bits(pmf);
}

double joint_entropy(std::span<const double> joint) {
    check_normalized(joint);
    return shannon_bits(joint);
}

double mutual_information(const PixelPatch& a, const PixelPatch& b, int bins) {
    const JointHistogram h = build_joint_histogram(a, b, bins);
    const auto xlogx = detail::xlogx_table(h.total);

    std::vector<std::uint64_t> row(bins, 0), col(bins, 0);
    for (int i = 0; i < bins; ++i) {
        for (int j = 0; j < bins; ++j) {
            row[i] += h.at(i, j);
            col[j] += h.at(i, j);
        }
    }
    std::vector<std::uint32_t> freq;
    const double joint_sum = sum_xlogx<std::uint64_t>(h.counts, xlogx, freq);
    const double sv = sum_xlogx<std::uint64_t>(row, xlogx, freq);
    const double sz = sum_xlogx<std::uint64_t>(col, xlogx, freq);
    return detail::mi_from_sums(joint_sum, sv, sz, h.total, xlogx);
}

double joint_mi_approx(std::span<const PixelPatch> sampled, const PixelPatch& candidate, int bins) {
    if (sampled.empty()) throw ConfigError("joint_mi_approx: sampled set is empty");
    double sum = 0.0;
    for (const auto& s : sampled) sum += mutual_information(s, candidate, bins);
    return sum / static_cast<double>(sampled.size());
}

double joint_mi_exact(std::span<const PixelPatch> sampled, const PixelPatch& candidate, int bins) {
    check_bins(bins);
    if (sampled.empty()) throw ConfigError("joint_mi_exact: sampled set is empty");
    for (const auto& s : sampled) check_same_shape(s, candidate);

    // bins^(k+1) must stay under the cell limit.
    std::uint64_t cells = 1;
    for (std::size_t k = 0; k <= sampled.size(); ++k) {
        cells *= static_cast<std::uint64_t>(bins);
        if (cells > kExactJointCellLimit) {
            throw RuntimeError("joint_mi_exact: table of bins^" + std::to_string(sampled.size() + 1) +
                               " cells exceeds the limit of 2^20 (" + std::to_string(kExactJointCellLimit) + ")");
        }
    }
    const std::uint64_t tuple_cells = cells / static_cast<std::uint64_t>(bins);

    std::vector<std::uint32_t> all(cells, 0), tuples(tuple_cells, 0), cand(bins, 0);
    const std::size_t n = candidate.size();
    for (std::size_t p = 0; p < n; ++p) {
        std::uint64_t code = 0;
        for (const auto& s : sampled) code = code * bins + bin_of(s.values()[p], bins);
        const int c = bin_of(candidate.values()[p], bins);
        ++tuples[code];
        ++all[code * bins + c];
        ++cand[c];
    }
    const auto xlogx = detail::xlogx_table(n);
    std::vector<std::uint32_t> freq;
    const double h_tuple = entropy_of_counts(tuples, n, xlogx, freq);
    const double h_cand = entropy_of_counts(cand, n, xlogx, freq);
    const double h_all = entropy_of_counts(all, n, xlogx, freq);
    return std::max(h_tuple + h_cand - h_all, 0.0);
}

MiEvaluator::MiEvaluator(const PixelPatch& reference, int bins)
    : bins_(bins), width_(reference.width()), height_(reference.height()) {
    check_bins(bins);
    if (reference.empty()) throw ConfigError("reference patch is empty");
    const std::size_t n = reference.size();
    ref_codes_.resize(n);
    ref_marginal_.assign(bins, 0);
    for (std::size_t p = 0; p < n; ++p) {
        const int z = bin_of(reference.values()[p], bins);
        ref_codes_[p] = static_cast<std::uint16_t>(z);
        ++ref_marginal_[z];
    }
    xlogx_ = detail::xlogx_table(n);
    std::vector<std::uint32_t> freq;
    sz_ = sum_xlogx<std::uint64_t>(ref_marginal_, xlogx_, freq);
    const auto cells = static_cast<std::size_t>(bins) * bins;
    cells_.assign(cells, 0);
    row_of_.resize(cells);
    for (std::size_t c = 0; c < cells; ++c) row_of_[c] = static_cast<std::uint16_t>(c / bins);
    touched_.resize(n);
    cand_marginal_.assign(bins, 0);
    count_freq_.assign(n + 1, 0);
}

double MiEvaluator::operator()(std::span<const std::uint8_t> candidate) {
    const std::size_t n = ref_codes_.size();
    if (candidate.size() != n) {
        throw ConfigError("candidate holds " + std::to_string(candidate.size()) + " pixels, reference " +
                          std::to_string(n));
    }
    std::size_t used = 0;
    for (std::size_t p = 0; p < n; ++p) {
        const std::uint32_t cell = static_cast<std::uint32_t>(bin_of(candidate[p], bins_)) * bins_ + ref_codes_[p];
        touched_[used] = cell;
        used += cells_[cell]++ == 0;
    }
    return finish(used);
}

double MiEvaluator::evaluate_binned(const std::uint16_t* codes, std::size_t pitch) {
    const std::uint16_t* ref = ref_codes_.data();
    std::uint32_t* cells = cells_.data();
    std::uint32_t* touched = touched_.data();
    std::size_t used = 0;
    for (int y = 0; y < height_; ++y) {
        const std::uint16_t* row = codes + static_cast<std::size_t>(y) * pitch;
        for (int x = 0; x < width_; ++x) {
            const std::uint32_t cell = static_cast<std::uint32_t>(row[x]) + *ref++;
            touched[used] = cell;
            used += cells[cell]++ == 0;
        }
    }
    return finish(used);
}

double MiEvaluator::finish(std::size_t used) {
    std::fill(cand_marginal_.begin(), cand_marginal_.end(), 0);
    std::uint32_t max_count = 0;
    for (std::size_t k = 0; k < used; ++k) {
        const std::uint32_t cell = touched_[k];
        const std::uint32_t c = cells_[cell];
        max_count = std::max(max_count, c);
        ++count_freq_[c];
        cand_marginal_[row_of_[cell]] += c;
        cells_[cell] = 0;
    }
    const auto freq = std::span<const std::uint32_t>(count_freq_).first(max_count + 1);
    const double joint_sum = detail::sum_xlogx_from_freq(freq, xlogx_);
    std::fill(count_freq_.begin(), count_freq_.begin() + max_count + 1, 0);

    // Marginal sum through the same count-of-counts path as mutual_information.
    std::uint64_t max_marginal = 0;
    for (int i = 0; i < bins_; ++i) {
        const std::uint64_t c = cand_marginal_[i];
        max_marginal = std::max(max_marginal, c);
        ++count_freq_[c];
    }
    const double sv = detail::sum_xlogx_from_freq(std::span<const std::uint32_t>(count_freq_).first(max_marginal + 1), xlogx_);
    std::fill(count_freq_.begin(), count_freq_.begin() + max_marginal + 1, 0);
    return detail::mi_from_sums(joint_sum, sv, sz_, ref_codes_.size(), xlogx_);
}

std::vector<std::uint16_t> premultiplied_bins(std::span<const std::uint8_t> values, int bins) {
    check_bins(bins);
    std::vector<std::uint16_t> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = static_cast<std::uint16_t>(bin_of(values[i], bins) * bins);
    }
    return out;
}

namespace detail {

std::vector<double> xlogx_table(std::uint64_t n) {
    std::vector<double> t(n + 1, 0.0);
    for (std::uint64_t c = 2; c <= n; ++c) {
        const double x = static_cast<double>(c);
        t[c] = x * std::log2(x);
    }
    return t;
}

double sum_xlogx_from_freq(std::span<const std::uint32_t> freq, std::span<const double> xlogx) {
    double s = 0.0;
    for (std::size_t c = 2; c < freq.size(); ++c) {
        if (freq[c] != 0) s += static_cast<double>(freq[c]) * xlogx[c];
    }
    return s;
}

double mi_from_sums(double joint_sum, double marginal_sum_v, double marginal_sum_z, std::uint64_t total,
                    std::span<const double> xlogx) {
    // Both sides are symmetric sums, so a constant input cancels to exactly 0.
    const double mi = ((joint_sum + xlogx[total]) - (marginal_sum_v + marginal_sum_z)) / static_cast<double>(total);
    return std::max(mi, 0.0);
}

}  // namespace detail

}  // namespace mitfas
