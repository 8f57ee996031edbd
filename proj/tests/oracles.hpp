#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "ceop/entropy.hpp"
#include "ceop/ordinal.hpp"

namespace ceop::testing {

/// Brute-force pair distribution of order d for i.i.d. continuous input:
/// every ordering of d+2 successive points is equally likely, and each
/// determines the patterns of its first and last d+1 points.
inline PairDistribution iid_pair_distribution_enumerated(int d) {
    const auto m = pattern_count(d);
    PairDistribution dist;
    dist.order = d;
    dist.p.assign(static_cast<std::size_t>(m * m), 0.0);

    std::vector<double> values(static_cast<std::size_t>(d) + 2);
    std::iota(values.begin(), values.end(), 0.0);
    std::size_t n_orderings = 0;
    std::sort(values.begin(), values.end());
    do {
        const auto first =
            encode_pattern({values.data(), static_cast<std::size_t>(d) + 1});
        const auto last =
            encode_pattern({values.data() + 1, static_cast<std::size_t>(d) + 1});
        dist.p[static_cast<std::size_t>(first.code * m + last.code)] += 1.0;
        ++n_orderings;
    } while (std::next_permutation(values.begin(), values.end()));
    for (double& v : dist.p) {
        v /= static_cast<double>(n_orderings);
    }
    return dist;
}

/// Uniform distribution over the (order+1)! patterns of one order.
inline std::vector<double> uniform_pattern_distribution(int order) {
    const auto m = pattern_count(order);
    return std::vector<double>(static_cast<std::size_t>(m),
                               1.0 / static_cast<double>(m));
}

/// Direct evaluation of the empirical conditional entropy formula, kept
/// independent of the accumulator-based implementation.
inline double ece_direct(const PairCounts& counts) {
    const auto m = pattern_count(counts.order);
    double acc = 0.0;
    for (std::int64_t i = 0; i < m; ++i) {
        const auto ni = counts.singles[static_cast<std::size_t>(i)];
        if (ni == 0) {
            continue;
        }
        for (std::int64_t j = 0; j < m; ++j) {
            const auto nij = counts.pair(i, j);
            if (nij > 0) {
                acc -= static_cast<double>(nij) *
                       std::log(static_cast<double>(nij) / static_cast<double>(ni));
            }
        }
    }
    return acc / static_cast<double>(counts.total_pairs);
}

}  // namespace ceop::testing
