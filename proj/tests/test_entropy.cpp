#include "ceop/entropy.hpp"

#include <cmath>
#include <vector>

#include <doctest.h>

#include "ceop/processes.hpp"
#include "ceop/rng.hpp"
#include "oracles.hpp"

using namespace ceop;
using doctest::Approx;

namespace {

PatternSequence random_sequence(Rng& rng, int d, std::size_t len) {
    PatternSequence seq{d, d, {}};
    const auto m = pattern_count(d);
    for (std::size_t k = 0; k < len; ++k) {
        seq.codes.push_back(static_cast<std::int32_t>(rng.uniform_int(0, m - 1)));
    }
    return seq;
}

}  // namespace

TEST_CASE("ece is zero when every pattern has a unique successor") {
    const PatternSequence seq{1, 1, {0, 1, 0, 1, 0}};
    CHECK(ece(count_range(seq, 1, 5)) == Approx(0.0).epsilon(1e-15));
}

TEST_CASE("ece of the short mixed example equals 2 ln 2 / 3") {
    const PatternSequence seq{1, 1, {0, 0, 1, 1}};
    const double value = ece(count_range(seq, 1, 4));
    CHECK(value == Approx(2.0 * std::log(2.0) / 3.0).epsilon(1e-12));
    CHECK(value == Approx(0.462098).epsilon(1e-5));
}

TEST_CASE("uniform product counts reach the upper bound ln((d+1)!)") {
    // order 1: singles (2, 2), every pair cell 1, T = 4
    PairCounts c1{1, {2, 2}, {1, 1, 1, 1}, 4};
    CHECK(ece(c1) == Approx(std::log(2.0)).epsilon(1e-12));

    // order 2: singles all 6, every pair cell 1, T = 36
    PairCounts c2{2, std::vector<std::int64_t>(6, 6), std::vector<std::int64_t>(36, 1), 36};
    CHECK(ece(c2) == Approx(std::log(6.0)).epsilon(1e-12));
}

TEST_CASE("ece rejects empty counts") {
    PairCounts empty{1, {0, 0}, {0, 0, 0, 0}, 0};
    CHECK_THROWS_AS(ece(empty), std::invalid_argument);
}

TEST_CASE("ece agrees with the direct formula and stays within bounds") {
    Rng rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = static_cast<int>(rng.uniform_int(1, 3));
        const auto len = static_cast<std::size_t>(rng.uniform_int(5, 500));
        const PatternSequence seq = random_sequence(rng, d, len);
        const PairCounts counts = count_range(seq, seq.start_time, seq.end_time());
        const double value = ece(counts);
        CHECK(value == Approx(testing::ece_direct(counts)).epsilon(1e-12));
        CHECK(value >= 0.0);
        CHECK(value <= std::log(static_cast<double>(pattern_count(d))) + 1e-12);
    }
}

TEST_CASE("ece equals the entropy of the estimated pair distribution") {
    Rng rng(1234);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = static_cast<int>(rng.uniform_int(1, 3));
        const auto len = static_cast<std::size_t>(rng.uniform_int(10, 300));
        const PatternSequence seq = random_sequence(rng, d, len);
        const double from_counts = ece(count_range(seq, seq.start_time, seq.end_time()));
        const double from_dist = entropy_h(estimate_pair_distribution(seq));
        CHECK(from_counts == Approx(from_dist).epsilon(1e-9));
    }
}

TEST_CASE("merged counts never lose conditional entropy (concavity)") {
    Rng rng(31337);
    for (int trial = 0; trial < 300; ++trial) {
        const int d = static_cast<int>(rng.uniform_int(1, 3));
        const auto len = static_cast<std::size_t>(rng.uniform_int(6, 400));
        const PatternSequence seq = random_sequence(rng, d, len);
        const std::int64_t a = seq.start_time;
        const std::int64_t c = seq.end_time();
        const std::int64_t b = rng.uniform_int(a + 1, c - 1);
        const PairCounts left = count_range(seq, a, b);
        const PairCounts right = count_range(seq, b, c);
        const PairCounts merged = merge_counts(left, right);
        const double lhs = static_cast<double>(merged.total_pairs) * ece(merged);
        const double rhs = static_cast<double>(left.total_pairs) * ece(left) +
                           static_cast<double>(right.total_pairs) * ece(right);
        CHECK(lhs >= rhs - 1e-9);
    }
}

TEST_CASE("entropy_h handles point mass and uniform tables") {
    PairDistribution point{1, {1.0, 0.0, 0.0, 0.0}};
    CHECK(entropy_h(point) == Approx(0.0).epsilon(1e-15));

    PairDistribution uniform{2, std::vector<double>(36, 1.0 / 36.0)};
    CHECK(entropy_h(uniform) == Approx(std::log(6.0)).epsilon(1e-12));
}

TEST_CASE("entropy_h rejects unnormalized tables") {
    PairDistribution bad{1, {0.5, 0.2, 0.1, 0.1}};
    CHECK_THROWS_AS(entropy_h(bad), std::invalid_argument);
    PairDistribution negative{1, {1.2, -0.2, 0.0, 0.0}};
    CHECK_THROWS_AS(entropy_h(negative), std::invalid_argument);
}

TEST_CASE("mix endpoints and fixed points") {
    Rng rng(7);
    PairDistribution P{1, {0.4, 0.1, 0.3, 0.2}};
    PairDistribution Q{1, {0.25, 0.25, 0.25, 0.25}};
    const PairDistribution full = mix(P, Q, 1.0);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(full.p[k] == Approx(P.p[k]));
    }
    for (int i = 0; i < 5; ++i) {
        const double w = rng.uniform01();
        const PairDistribution self = mix(P, P, w);
        for (std::size_t k = 0; k < 4; ++k) {
            CHECK(self.p[k] == Approx(P.p[k]));
        }
    }
    PairDistribution a{1, {1.0, 0.0, 0.0, 0.0}};
    PairDistribution b{1, {0.0, 0.0, 0.0, 1.0}};
    const PairDistribution half = mix(a, b, 0.5);
    CHECK(half.p[0] == Approx(0.5));
    CHECK(half.p[3] == Approx(0.5));

    PairDistribution other_order{2, std::vector<double>(36, 1.0 / 36.0)};
    CHECK_THROWS_AS(mix(P, other_order, 0.5), std::invalid_argument);
}

TEST_CASE("estimate_pair_distribution basics") {
    const PatternSequence alternating{1, 1, {0, 1, 0, 1, 0}};
    const PairDistribution dist = estimate_pair_distribution(alternating);
    CHECK(dist.cell(0, 1) == Approx(0.5));
    CHECK(dist.cell(1, 0) == Approx(0.5));
    CHECK(dist.cell(0, 0) == Approx(0.0));

    const PatternSequence constant{1, 1, {1, 1, 1, 1}};
    CHECK(estimate_pair_distribution(constant).cell(1, 1) == Approx(1.0));

    const PatternSequence tiny{1, 1, {0}};
    CHECK_THROWS_AS(estimate_pair_distribution(tiny), std::invalid_argument);
}

TEST_CASE("long iid input approaches the enumerated pair distribution") {
    const int d = 1;
    Rng rng(2025);
    std::vector<double> x(200000);
    for (double& v : x) {
        v = rng.uniform01();
    }
    const PairDistribution est = estimate_pair_distribution(extract_sequence(x, d));
    const PairDistribution oracle = testing::iid_pair_distribution_enumerated(d);
    const auto n = static_cast<double>(x.size() - 1);
    for (std::size_t k = 0; k < est.p.size(); ++k) {
        const double se = std::sqrt(oracle.p[k] * (1.0 - oracle.p[k]) / n);
        CHECK(std::abs(est.p[k] - oracle.p[k]) < 5.0 * se + 1e-12);
    }
}

TEST_CASE("project_pairs reproduces the iid order-1 pair table") {
    const PairDistribution projected =
        project_pairs(1, testing::uniform_pattern_distribution(2));
    CHECK(projected.cell(0, 0) == Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(projected.cell(0, 1) == Approx(2.0 / 6.0).epsilon(1e-12));
    CHECK(projected.cell(1, 0) == Approx(2.0 / 6.0).epsilon(1e-12));
    CHECK(projected.cell(1, 1) == Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("project_pairs matches the enumeration oracle at higher order") {
    for (int d = 1; d <= 3; ++d) {
        const PairDistribution projected =
            project_pairs(d, testing::uniform_pattern_distribution(d + 1));
        const PairDistribution oracle = testing::iid_pair_distribution_enumerated(d);
        for (std::size_t k = 0; k < projected.p.size(); ++k) {
            CHECK(projected.p[k] == Approx(oracle.p[k]).epsilon(1e-12));
        }
    }
}

TEST_CASE("project_pairs sends the increasing pattern to the increasing pair") {
    for (int d = 1; d <= 3; ++d) {
        std::vector<double> high(static_cast<std::size_t>(pattern_count(d + 1)), 0.0);
        high[0] = 1.0;  // monotone increasing window
        const PairDistribution projected = project_pairs(d, high);
        CHECK(projected.cell(0, 0) == Approx(1.0));
        CHECK(projected.total() == Approx(1.0));
    }
}

TEST_CASE("project_pairs preserves mass and validates input") {
    Rng rng(11);
    std::vector<double> high(static_cast<std::size_t>(pattern_count(2)), 0.0);
    double sum = 0.0;
    for (double& v : high) {
        v = rng.uniform01();
        sum += v;
    }
    for (double& v : high) {
        v /= sum;
    }
    const PairDistribution projected = project_pairs(1, high);
    CHECK(projected.total() == Approx(1.0).epsilon(1e-12));

    high[0] += 0.5;
    CHECK_THROWS_AS(project_pairs(1, high), std::invalid_argument);
}

TEST_CASE("ece stabilizes with growing sample size") {
    // Successive halvings of |ece(L) - ece(2L)| for a stationary process.
    const int d = 2;
    double prev_gap = -1.0;
    for (const std::int64_t len : {1000, 10000, 100000}) {
        double gap = 0.0;
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const ProcessSpec spec = ProcessSpec::ar({0.3}, {}, 2 * len);
            const std::vector<double> x = gen_ar(spec, seed);
            const std::vector<double> half(x.begin(), x.begin() + len + 1);
            const PatternSequence seq_half = extract_sequence(half, d);
            const PatternSequence seq_full = extract_sequence(x, d);
            const double e_half =
                ece(count_range(seq_half, seq_half.start_time, seq_half.end_time()));
            const double e_full =
                ece(count_range(seq_full, seq_full.start_time, seq_full.end_time()));
            gap += std::abs(e_half - e_full) / 3.0;
        }
        if (prev_gap >= 0.0) {
            CHECK(gap < prev_gap);
        }
        prev_gap = gap;
    }
}
