#include "ceop/entropy.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ceop {

namespace {

constexpr std::size_t kMaxTableSize = std::size_t{1} << 21;

}  // namespace

double nlogn(std::int64_t n) {
    if (n <= 1) {
        return 0.0;
    }
    const auto idx = static_cast<std::size_t>(n);
    if (idx >= kMaxTableSize) {
        const auto v = static_cast<double>(n);
        return v * std::log(v);
    }
    thread_local std::vector<double> table{0.0, 0.0};
    if (idx >= table.size()) {
        std::size_t grown = std::max(table.size() * 2, idx + 1);
        grown = std::min(grown, kMaxTableSize);
        table.reserve(grown);
        for (std::size_t k = table.size(); k < grown; ++k) {
            const auto v = static_cast<double>(k);
            table.push_back(v * std::log(v));
        }
    }
    return table[idx];
}

double PairDistribution::marginal(std::int64_t i) const {
    const auto m = pattern_count(order);
    double sum = 0.0;
    for (std::int64_t j = 0; j < m; ++j) {
        sum += cell(i, j);
    }
    return sum;
}

double PairDistribution::total() const {
    return std::accumulate(p.begin(), p.end(), 0.0);
}

void validate_distribution(const PairDistribution& dist, double tolerance) {
    const auto m = pattern_count(dist.order);
    if (dist.order < 1 || dist.order > kMaxPairOrder) {
        throw std::invalid_argument("pair distribution: unsupported order");
    }
    if (static_cast<std::int64_t>(dist.p.size()) != m * m) {
        throw std::invalid_argument("pair distribution: wrong table size");
    }
    for (double v : dist.p) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("pair distribution: negative or non-finite cell");
        }
    }
    if (std::abs(dist.total() - 1.0) > tolerance) {
        throw std::invalid_argument("pair distribution: not normalized");
    }
}

double ece(const PairCounts& counts) {
    if (counts.total_pairs < 1) {
        throw std::invalid_argument("ece: no pairs counted");
    }
    double acc = 0.0;
    for (std::int64_t n : counts.singles) {
        acc += nlogn(n);
    }
    for (std::int64_t n : counts.pairs) {
        acc -= nlogn(n);
    }
    return acc / static_cast<double>(counts.total_pairs);
}

double entropy_h(const PairDistribution& dist) {
    validate_distribution(dist);
    const auto m = pattern_count(dist.order);
    double h = 0.0;
    for (std::int64_t i = 0; i < m; ++i) {
        double row = 0.0;
        for (std::int64_t j = 0; j < m; ++j) {
            const double pij = dist.cell(i, j);
            if (pij > 0.0) {
                h -= pij * std::log(pij);
                row += pij;
            }
        }
        if (row > 0.0) {
            h += row * std::log(row);
        }
    }
    return h;
}

PairDistribution mix(const PairDistribution& P, const PairDistribution& Q, double w) {
    if (P.order != Q.order) {
        throw std::invalid_argument("mix: order mismatch");
    }
    if (!(w >= 0.0 && w <= 1.0)) {
        throw std::invalid_argument("mix: weight outside [0, 1]");
    }
    PairDistribution out;
    out.order = P.order;
    out.p.resize(P.p.size());
    for (std::size_t k = 0; k < P.p.size(); ++k) {
        out.p[k] = w * P.p[k] + (1.0 - w) * Q.p[k];
    }
    return out;
}

PairDistribution estimate_pair_distribution(const PatternSequence& seq) {
    if (seq.codes.size() < 2) {
        throw std::invalid_argument("estimate_pair_distribution: need at least two codes");
    }
    const PairCounts counts = count_range(seq, seq.start_time, seq.end_time());
    PairDistribution dist;
    dist.order = seq.order;
    dist.p.resize(counts.pairs.size());
    const auto total = static_cast<double>(counts.total_pairs);
    for (std::size_t k = 0; k < counts.pairs.size(); ++k) {
        dist.p[k] = static_cast<double>(counts.pairs[k]) / total;
    }
    return dist;
}

PairDistribution project_pairs(int low_order, std::span<const double> dist_high) {
    if (low_order < 1 || low_order > kMaxPairOrder) {
        throw std::invalid_argument("project_pairs: unsupported order");
    }
    const int high_order = low_order + 1;
    const auto n_high = pattern_count(high_order);
    if (static_cast<std::int64_t>(dist_high.size()) != n_high) {
        throw std::invalid_argument("project_pairs: wrong input size");
    }
    double mass = 0.0;
    for (double v : dist_high) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("project_pairs: negative or non-finite input cell");
        }
        mass += v;
    }
    if (std::abs(mass - 1.0) > 1e-9) {
        throw std::invalid_argument("project_pairs: input not normalized");
    }

    const auto m = pattern_count(low_order);
    PairDistribution out;
    out.order = low_order;
    out.p.assign(static_cast<std::size_t>(m * m), 0.0);

    const auto n_points = static_cast<std::size_t>(high_order) + 1;
    std::vector<double> values(n_points);
    for (std::int64_t c = 0; c < n_high; ++c) {
        const double prob = dist_high[static_cast<std::size_t>(c)];
        if (prob == 0.0) {
            continue;
        }
        // Representative values realizing the ranking: point j gets its
        // ascending rank, so sub-windows inherit the right sub-patterns.
        const std::vector<int> perm =
            decode_pattern(OrdinalPattern{high_order, static_cast<std::int32_t>(c)});
        for (std::size_t pos = 0; pos < n_points; ++pos) {
            values[static_cast<std::size_t>(perm[pos])] =
                static_cast<double>(n_points - 1 - pos);
        }
        const auto first = encode_pattern({values.data(), n_points - 1});
        const auto last = encode_pattern({values.data() + 1, n_points - 1});
        out.p[static_cast<std::size_t>(first.code * m + last.code)] += prob;
    }

    const double total = out.total();
    for (double& v : out.p) {
        v /= total;
    }
    return out;
}

}  // namespace ceop
