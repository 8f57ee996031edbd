#pragma once

#include <cstdint>

#include "ceop/entropy.hpp"
#include "ceop/processes.hpp"

namespace ceop {

/**
 * @brief Inputs for the asymptotic per-sample value of the split statistic.
 *
 * P and Q are the pattern-pair distributions of the two stationary parts,
 * gamma the fraction of samples drawn from P, theta the candidate split
 * fraction. Orders must match and gamma, theta must be strictly interior.
 */
struct DeltaQuery {
    int order = 0;
    double gamma = 0.0;
    double theta = 0.0;
    PairDistribution P;
    PairDistribution Q;
};

/**
 * @brief The asymptotic per-sample statistic value.
 *
 * For theta < gamma:
 *   H(gamma P + (1-gamma) Q) - theta H(P)
 *     - (1-theta) H( (gamma-theta)/(1-theta) P + (1-gamma)/(1-theta) Q )
 * and symmetrically for theta >= gamma. Nonnegative by concavity of H;
 * both branches agree at theta == gamma where the maximum is attained.
 */
double delta(const DeltaQuery& query);

/// The maximum of delta over theta, attained at theta = gamma:
/// H(gamma P + (1-gamma) Q) - gamma H(P) - (1-gamma) H(Q).
double delta_max(int order, double gamma, const PairDistribution& P, const PairDistribution& Q);

/**
 * @brief Monte-Carlo pattern-pair distribution of a stationary process.
 *
 * Generates one realization of mc_length + 1 values from a single-segment
 * spec, extracts patterns of the requested order and returns the relative
 * pair frequencies. Lengths of 1e7 put the cells within a few 1e-4 of truth.
 */
PairDistribution mc_pair_distribution(const ProcessSpec& spec, std::int64_t mc_length,
                                      std::uint64_t seed, int order);

}  // namespace ceop
