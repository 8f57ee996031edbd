#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ceop/ordinal.hpp"
#include "ceop/rng.hpp"
#include "ceop/statistics.hpp"

namespace ceop {

/// Minimal sub-sequence length for reliable conditional-entropy estimation:
/// (d+1)!(d+1), the number of distinct pattern pairs.
std::int64_t default_t_min(int order);

/// Minimal series length (number of values) accepted by the detection front
/// ends: 2 (d+1)! (d+1) + 1.
std::int64_t min_series_values(int order);

struct DetectionConfig {
    double alpha = 0.05;
    /// Minimal margin between a candidate and the segment ends;
    /// 0 means default_t_min(order).
    std::int64_t t_min = 0;
    /// Overrides the bootstrap sample count floor(5 / alpha).
    std::optional<std::size_t> n_boot;
    std::uint64_t master_seed = 0;
    /// Worker count for bootstrap replicates; results do not depend on it.
    int threads = 1;
    /// Keep full statistic profiles in the report (drop for bulk runs).
    bool keep_profiles = true;

    void validate() const;
};

/// One examined segment: the candidate, its statistic value, and the
/// bootstrap threshold it was compared against.
struct SegmentDecision {
    std::int64_t seg_start = 0;  // candidate-time range examined
    std::int64_t seg_end = 0;
    std::string phase;  // "single", "step1" or "step2"
    bool too_short = false;
    std::int64_t candidate = -1;
    double stat_value = std::numeric_limits<double>::quiet_NaN();
    double threshold = std::numeric_limits<double>::quiet_NaN();
    std::size_t n_boot = 0;
    bool detected = false;
};

struct DetectionReport {
    int order = 0;
    double alpha = 0.0;
    std::uint64_t master_seed = 0;
    std::vector<std::int64_t> change_points;  // series time, strictly increasing
    std::int64_t n_segments = 1;
    std::vector<SegmentDecision> decisions;
    std::vector<StatProfile> profiles;  // parallel to decisions when kept
};

/// Cuts the values into consecutive blocks of block_len (final short block
/// kept) and concatenates the blocks in a uniformly random order.
template <typename T>
std::vector<T> block_shuffle(std::span<const T> values, std::int64_t block_len, Rng& rng) {
    if (block_len < 1) {
        throw std::invalid_argument("block_shuffle: block length must be positive");
    }
    const auto n = static_cast<std::int64_t>(values.size());
    const auto n_blocks = static_cast<std::size_t>((n + block_len - 1) / block_len);
    std::vector<std::size_t> order(n_blocks);
    for (std::size_t k = 0; k < n_blocks; ++k) {
        order[k] = k;
    }
    rng.shuffle(order);

    std::vector<T> out;
    out.reserve(static_cast<std::size_t>(n));
    for (std::size_t blk : order) {
        const auto lo = static_cast<std::int64_t>(blk) * block_len;
        const auto hi = std::min<std::int64_t>(lo + block_len, n);
        out.insert(out.end(), values.begin() + lo, values.begin() + hi);
    }
    return out;
}

/// Upper quantile of bootstrap maxima: sorts a copy in decreasing order and
/// returns the floor(alpha * n)-th largest, index clamped to [1, n].
double bootstrap_threshold(std::vector<double> maxima, double alpha);

/// Bootstrap sample count floor(5 / alpha).
std::size_t bootstrap_count(double alpha);

/**
 * @brief Detects at most one change-point in the series x(0..L).
 *
 * Patterns of the given order drive the statistic; the candidate is the
 * profile argmax over [d + t_min, L - t_min] in pattern time (reported as a
 * series time, see map_to_series_time). Returns nothing when the pattern
 * span L - d is shorter than twice the minimal margin.
 *
 * The candidate is accepted when its statistic reaches the block-bootstrap
 * threshold: floor(5/alpha) surrogates are built by cutting the series into
 * value blocks of length d+1, permuting the blocks and re-extracting
 * patterns; the threshold is the floor(alpha n)-th largest surrogate profile
 * maximum. Ties accept. Shuffling the values rather than the codes keeps
 * every surrogate transition realizable by an actual window sequence, which
 * is what calibrates the threshold to the stationary null.
 *
 * Identical (series, order, config) inputs give identical results for any
 * thread count; every replicate draws from its own counter-derived
 * substream.
 */
std::optional<std::int64_t> detect_single(std::span<const double> x, int order,
                                          const DetectionConfig& config);

/// detect_single with the examined profile, threshold and decision attached.
DetectionReport detect_single_report(std::span<const double> x, int order,
                                     const DetectionConfig& config);

/**
 * @brief Detects any number of change-points.
 *
 * Step 1 applies single detection recursively at doubled alpha (binary
 * segmentation); step 2 re-tests every interior boundary at alpha on the
 * union of its two adjacent segments, moving or deleting it. Step 2 never
 * increases the boundary count. A boundary at time t splits the patterns so
 * that the d windows straddling t belong to neither side: the segment
 * between boundaries b0 < b1 holds the patterns of x(b0..b1).
 */
DetectionReport detect_multiple(std::span<const double> x, int order,
                                const DetectionConfig& config);

/// Reports a pattern-time estimate in original-series coordinates. The d-1
/// windows after a change straddle it, and the estimate is conventionally
/// reported unshifted, so this is the identity.
std::int64_t map_to_series_time(std::int64_t pattern_time, int order);

// ---------------------------------------------------------------------------
// Generic segmentation machinery, shared with non-ordinal detectors.
// ---------------------------------------------------------------------------

struct RangeDetection {
    SegmentDecision decision;
    StatProfile profile;
};

/// Examines the candidate range [a, b] at the given level; call_seed makes
/// the bootstrap reproducible.
using RangeDetector =
    std::function<RangeDetection(std::int64_t a, std::int64_t b, double alpha,
                                 std::uint64_t call_seed)>;

/**
 * @brief Two-step multiple-change detection over an abstract detector.
 *
 * Boundaries live in candidate-time units over [domain_start, domain_end];
 * segment k spans [B_k + gap, B_k+1] so that `gap` transitional positions
 * after each boundary belong to neither side.
 */
DetectionReport segment_and_verify(std::int64_t domain_start, std::int64_t domain_end,
                                   std::int64_t gap, const RangeDetector& detector,
                                   const DetectionConfig& config);

}  // namespace ceop
