#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ceop/ordinal.hpp"

namespace ceop {

/// n * ln(n) with 0 ln 0 = 0, backed by a lazily grown thread-local table.
/// The table makes the incremental statistic updates O(1) without repeated
/// log evaluations.
double nlogn(std::int64_t n);

/**
 * @brief A probability table over pattern pairs (i, j) of one order.
 *
 * Cells are row-major, p(i, j) at index i * (d+1)! + j; the single-pattern
 * marginal is the row sum. Valid tables are nonnegative and sum to 1.
 */
struct PairDistribution {
    int order = 0;
    std::vector<double> p;  // (d+1)!^2, row-major

    double cell(std::int64_t i, std::int64_t j) const {
        return p[static_cast<std::size_t>(i * pattern_count(order) + j)];
    }
    double marginal(std::int64_t i) const;
    double total() const;
};

/// Throws std::invalid_argument unless the table is nonnegative and sums to 1
/// within the given tolerance.
void validate_distribution(const PairDistribution& dist, double tolerance = 1e-9);

/**
 * @brief Empirical conditional entropy from counts, in nats.
 *
 * eCE = -(1/T) sum_{i,j} n_ij ln(n_ij / n_i) with T the number of counted
 * pairs and the conventions 0 ln 0 = 0, 0/0 = 0. The value lies in
 * [0, ln((d+1)!)]. Computed from the sum-of-n-ln-n form so that callers can
 * share accumulator logic with the profile statistics.
 */
double ece(const PairCounts& counts);

/// Conditional entropy of a pair distribution, in nats:
/// H(P) = -sum p_ij ln p_ij + sum p_i ln p_i.
double entropy_h(const PairDistribution& dist);

/// Cell-wise convex combination w*P + (1-w)*Q; orders must match.
PairDistribution mix(const PairDistribution& P, const PairDistribution& Q, double w);

/// Relative pair frequencies over a whole sequence (at least two codes).
PairDistribution estimate_pair_distribution(const PatternSequence& seq);

/**
 * @brief Projects a pattern distribution of order d+1 to a pair distribution
 *        of order d.
 *
 * Every ranking of d+2 successive points determines the patterns of its first
 * and last d+1 points; the input cell's mass is added to that pair. dist_high
 * holds (d+2)! probabilities indexed by the order-(d+1) pattern code and must
 * be normalized.
 */
PairDistribution project_pairs(int low_order, std::span<const double> dist_high);

}  // namespace ceop
