#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ceop {

/// Largest supported pattern order for encoding and sequence extraction.
inline constexpr int kMaxPatternOrder = 6;

/// Largest order for which (d+1)!^2 pair tables are allocated.
inline constexpr int kMaxPairOrder = 5;

/// n! for small n; throws for n < 0 or n > 20.
std::int64_t factorial(int n);

/// Number of distinct patterns of the given order, (d+1)!.
std::int64_t pattern_count(int order);

/**
 * @brief An ordinal pattern of order d: the ranking of d+1 successive values.
 *
 * The pattern is the permutation (r_0, ..., r_d) with x_{r_0} >= ... >= x_{r_d},
 * ties broken so that r_{l-1} > r_l whenever x_{r_{l-1}} == x_{r_l}.
 *
 * Codes are the lexicographic rank of the reversed permutation
 * (r_d, ..., r_0) among all permutations of {0, ..., d}. Under this code the
 * strictly increasing window is 0 for every order and, for order 1, the
 * decreasing window is 1. The literature fixes codes only for order 1; this
 * assignment is one valid choice and is stable across the library.
 */
struct OrdinalPattern {
    int order = 0;
    std::int32_t code = 0;

    friend bool operator==(const OrdinalPattern&, const OrdinalPattern&) = default;
};

/// Computes the ordinal pattern of a window of d+1 finite values.
/// Throws std::invalid_argument for windows shorter than 2, longer than
/// kMaxPatternOrder + 1, or containing non-finite values.
OrdinalPattern encode_pattern(std::span<const double> window);

/// Inverse of encode_pattern's code: the permutation (r_0, ..., r_d).
std::vector<int> decode_pattern(const OrdinalPattern& pattern);

/**
 * @brief The pattern sequence of a time series.
 *
 * For a series x(0..L) the sequence holds one code per time t = d, ..., L,
 * where the code at t describes the window x(t-d), ..., x(t). start_time is
 * the time of the first code. Following the usual convention, the "length"
 * of a sequence over x(0..L) is L although it stores L - d + 1 codes.
 */
struct PatternSequence {
    int order = 0;
    std::int64_t start_time = 0;
    std::vector<std::int32_t> codes;

    std::int64_t end_time() const {
        return start_time + static_cast<std::int64_t>(codes.size()) - 1;
    }
    std::int32_t at(std::int64_t t) const { return codes[static_cast<std::size_t>(t - start_time)]; }
};

/// Extracts the pattern sequence of x(0..L) for the given order.
///
/// The window ranking is maintained incrementally, O(d) per step; a naive
/// per-window encode is equivalent and kept as a test oracle.
/// Throws std::invalid_argument if x has fewer than order + 1 values.
PatternSequence extract_sequence(std::span<const double> x, int order);

/**
 * @brief Pattern and pattern-pair occurrence counts over a sequence range.
 *
 * Counting a range [t_start, t_end] means counting the positions
 * l = t_start, ..., t_end - 1: singles[i] counts l with code(l) == i and
 * pairs[i][j] counts l with (code(l), code(l+1)) == (i, j). The code at
 * t_end therefore contributes only as a pair successor, which makes
 * row sums of pairs equal to singles exactly.
 */
struct PairCounts {
    int order = 0;
    std::vector<std::int64_t> singles;  // (d+1)!
    std::vector<std::int64_t> pairs;    // (d+1)!^2, row-major
    std::int64_t total_pairs = 0;

    std::int64_t pair(std::int64_t i, std::int64_t j) const {
        return pairs[static_cast<std::size_t>(i * static_cast<std::int64_t>(singles.size()) + j)];
    }
};

/// Counts patterns and pairs over [t_start, t_end]; requires
/// seq.start_time <= t_start < t_end <= seq.end_time().
PairCounts count_range(const PatternSequence& seq, std::int64_t t_start, std::int64_t t_end);

/// Field-wise sum of two compatible count tables.
PairCounts merge_counts(const PairCounts& a, const PairCounts& b);

}  // namespace ceop
