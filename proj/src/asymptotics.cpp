#include "ceop/asymptotics.hpp"

#include <stdexcept>

#include "ceop/ordinal.hpp"

namespace ceop {

double delta(const DeltaQuery& query) {
    if (query.P.order != query.order || query.Q.order != query.order) {
        throw std::invalid_argument("delta: distribution order mismatch");
    }
    if (!(query.gamma > 0.0 && query.gamma < 1.0) || !(query.theta > 0.0 && query.theta < 1.0)) {
        throw std::invalid_argument("delta: gamma and theta must lie in (0, 1)");
    }
    const double gamma = query.gamma;
    const double theta = query.theta;
    const double h_mix = entropy_h(mix(query.P, query.Q, gamma));
    if (theta < gamma) {
        const double w = (gamma - theta) / (1.0 - theta);
        return h_mix - theta * entropy_h(query.P) -
               (1.0 - theta) * entropy_h(mix(query.P, query.Q, w));
    }
    const double w = gamma / theta;
    return h_mix - theta * entropy_h(mix(query.P, query.Q, w)) -
           (1.0 - theta) * entropy_h(query.Q);
}

double delta_max(int order, double gamma, const PairDistribution& P, const PairDistribution& Q) {
    if (P.order != order || Q.order != order) {
        throw std::invalid_argument("delta_max: distribution order mismatch");
    }
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("delta_max: gamma must lie in (0, 1)");
    }
    return entropy_h(mix(P, Q, gamma)) - gamma * entropy_h(P) - (1.0 - gamma) * entropy_h(Q);
}

PairDistribution mc_pair_distribution(const ProcessSpec& spec, std::int64_t mc_length,
                                      std::uint64_t seed, int order) {
    if (!spec.change_points.empty()) {
        throw std::invalid_argument("mc_pair_distribution: spec must have a single segment");
    }
    if (mc_length < order + 2) {
        throw std::invalid_argument("mc_pair_distribution: length too small");
    }
    ProcessSpec run = spec;
    run.length = mc_length;
    const std::vector<double> x =
        spec.kind == ProcessKind::AR ? gen_ar(run, seed) : gen_nl(run, seed);
    const PatternSequence seq = extract_sequence(x, order);
    return estimate_pair_distribution(seq);
}

}  // namespace ceop
