#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "ceop/ordinal.hpp"

namespace ceop {

/**
 * @brief A change-point statistic evaluated over a range of candidate times.
 *
 * t_values are strictly increasing; argmax ties are broken toward the
 * smallest t. An empty profile (no admissible candidate) has argmax_t == -1
 * and max_value NaN.
 */
struct StatProfile {
    std::vector<std::int64_t> t_values;
    std::vector<double> s_values;
    std::int64_t argmax_t = -1;
    double max_value = std::numeric_limits<double>::quiet_NaN();

    bool empty() const { return t_values.empty(); }
};

/**
 * @brief Conditional-entropy split statistic at a single candidate time.
 *
 * For a sequence over pattern times [a, b] with b - a pairs,
 *
 *   ceofop(t) = (b - a - d) eCE[a, b] - (t - a) eCE[a, t] - (b - t - d) eCE[t + d, b].
 *
 * The d pairs straddling [t, t + d - 1] cover the transitional windows and
 * belong to neither part. Admissible candidates are a < t < b - d. This is
 * the reference implementation; it recomputes every entropy from scratch.
 * Throws std::invalid_argument for t outside the admissible range.
 */
double ceofop_at(const PatternSequence& seq, std::int64_t t);

/**
 * @brief Full ceofop profile in O(total) time via incremental count updates.
 *
 * Evaluates every admissible t in [a + t_min_offset, b - t_min_offset],
 * clamped to the statistic's validity range (a, b - d). Advancing t by one
 * moves one pair into the left counts and removes one from the right counts,
 * each an O(1) accumulator update. Values match ceofop_at pointwise.
 *
 * Returns an empty profile when no t is admissible.
 */
StatProfile ceofop_profile(const PatternSequence& seq, std::int64_t t_min_offset);

/// Same as ceofop_profile but over a bare code span whose first code sits at
/// pattern time first_time. Used on sequence sub-ranges and bootstrap
/// surrogates.
StatProfile ceofop_profile_codes(std::span<const std::int32_t> codes, int order,
                                 std::int64_t first_time, std::int64_t t_min_offset);

/**
 * @brief Likelihood-ratio statistic for a change in pattern transition
 *        probabilities at t, with the first pattern held fixed.
 *
 * Computed as -2 ln Lkl(H0) + 2 ln Lkl(HA) where the likelihoods are products
 * of the estimated transition probabilities n_ij / n_i over the whole range
 * (H0) and over the two parts (HA). Satisfies
 * lr = 2 ceofop(t) + 2 d eCE(full) identically.
 */
double lr_statistic(const PatternSequence& seq, std::int64_t t);

/// Brodsky-Darkhovsky mean-change statistic at split t (left part holds the
/// first t values): (t (L - t) / L^2)^delta |mean(left) - mean(right)|.
/// Requires 1 <= t < L.
double bd_exp(std::span<const double> x, std::int64_t t, double delta);

/// Correlation-change variant: bd_exp applied to y(t) = x(t) x(t+1).
double bd_corr(std::span<const double> x, std::int64_t t, double delta);

/// bd_exp at every t in [t_lo, t_hi] via prefix sums; bounds are clamped to
/// the valid range [1, L-1]. Empty profile when the series is too short.
StatProfile bd_exp_profile(std::span<const double> x, double delta, std::int64_t t_lo = 1,
                           std::int64_t t_hi = std::numeric_limits<std::int64_t>::max());

/// bd_corr at every t in [t_lo, t_hi].
StatProfile bd_corr_profile(std::span<const double> x, double delta, std::int64_t t_lo = 1,
                            std::int64_t t_hi = std::numeric_limits<std::int64_t>::max());

}  // namespace ceop
