#include "ceop/ordinal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <doctest.h>

#include "ceop/rng.hpp"

using namespace ceop;

namespace {

// Per-window reference: encode every window independently.
std::vector<std::int32_t> naive_codes(std::span<const double> x, int order) {
    std::vector<std::int32_t> codes;
    for (std::size_t t = static_cast<std::size_t>(order); t < x.size(); ++t) {
        codes.push_back(
            encode_pattern(x.subspan(t - static_cast<std::size_t>(order),
                                     static_cast<std::size_t>(order) + 1))
                .code);
    }
    return codes;
}

}  // namespace

TEST_CASE("encode_pattern matches the order-1 conventions") {
    CHECK(encode_pattern(std::vector<double>{1, 2}).code == 0);   // increasing
    CHECK(encode_pattern(std::vector<double>{2, 1}).code == 1);   // decreasing
    CHECK(encode_pattern(std::vector<double>{5, 5}).code == 0);   // tie -> index order (1, 0)
    CHECK(decode_pattern({1, 0}) == std::vector<int>{1, 0});
    CHECK(decode_pattern({1, 1}) == std::vector<int>{0, 1});
}

TEST_CASE("encode_pattern resolves ties toward larger indices") {
    const auto p = encode_pattern(std::vector<double>{2, 1, 2});
    CHECK(decode_pattern(p) == std::vector<int>{2, 0, 1});
}

TEST_CASE("monotone increasing windows have code 0 at every order") {
    for (int d = 1; d <= kMaxPatternOrder; ++d) {
        std::vector<double> w(static_cast<std::size_t>(d) + 1);
        std::iota(w.begin(), w.end(), 1.0);
        const auto p = encode_pattern(w);
        CHECK(p.order == d);
        CHECK(p.code == 0);
    }
}

TEST_CASE("encode_pattern rejects bad windows") {
    CHECK_THROWS_AS(encode_pattern(std::vector<double>{1.0}), std::invalid_argument);
    CHECK_THROWS_AS(encode_pattern(std::vector<double>{1.0, std::nan("")}),
                    std::invalid_argument);
    CHECK_THROWS_AS(encode_pattern(std::vector<double>{
                        1.0, std::numeric_limits<double>::infinity()}),
                    std::invalid_argument);
}

TEST_CASE("strict-order windows hit every code exactly once") {
    for (int d = 1; d <= 4; ++d) {
        std::vector<double> values(static_cast<std::size_t>(d) + 1);
        std::iota(values.begin(), values.end(), 0.0);
        std::sort(values.begin(), values.end());
        std::vector<bool> seen(static_cast<std::size_t>(pattern_count(d)), false);
        do {
            const auto p = encode_pattern(values);
            CHECK(p.code >= 0);
            CHECK(p.code < pattern_count(d));
            CHECK(!seen[static_cast<std::size_t>(p.code)]);
            seen[static_cast<std::size_t>(p.code)] = true;
        } while (std::next_permutation(values.begin(), values.end()));
        CHECK(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }));
    }
}

TEST_CASE("decoded permutations satisfy the defining order conditions") {
    Rng rng(20240811);
    for (int trial = 0; trial < 400; ++trial) {
        const int d = static_cast<int>(rng.uniform_int(1, 5));
        std::vector<double> w(static_cast<std::size_t>(d) + 1);
        for (double& v : w) {
            // Small alphabet so ties are common.
            v = static_cast<double>(rng.uniform_int(0, 2));
        }
        const auto perm = decode_pattern(encode_pattern(w));
        for (std::size_t l = 1; l < perm.size(); ++l) {
            const double prev = w[static_cast<std::size_t>(perm[l - 1])];
            const double cur = w[static_cast<std::size_t>(perm[l])];
            CHECK(prev >= cur);
            if (prev == cur) {
                CHECK(perm[l - 1] > perm[l]);
            }
        }
    }
}

TEST_CASE("extract_sequence on the worked order-1 example") {
    const std::vector<double> x{3, 1, 2, 4, 1, 3, 2, 4};
    const PatternSequence seq = extract_sequence(x, 1);
    CHECK(seq.start_time == 1);
    CHECK(seq.end_time() == 7);
    CHECK(seq.codes == std::vector<std::int32_t>{1, 0, 0, 1, 0, 1, 0});
}

TEST_CASE("extract_sequence edge shapes") {
    const std::vector<double> one_window{3.0, 1.0, 2.0};
    CHECK(extract_sequence(one_window, 2).codes.size() == 1);
    CHECK_THROWS_AS(extract_sequence(std::vector<double>{1.0, 2.0}, 2), std::invalid_argument);

    const std::vector<double> constant(50, 7.5);
    const PatternSequence seq = extract_sequence(constant, 3);
    for (auto c : seq.codes) {
        CHECK(c == seq.codes.front());
    }
}

TEST_CASE("incremental extraction matches the per-window oracle") {
    Rng rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        const int d = static_cast<int>(rng.uniform_int(1, 5));
        const auto n = static_cast<std::size_t>(rng.uniform_int(d + 1, 300));
        std::vector<double> x(n);
        const bool ties = trial % 2 == 0;
        for (double& v : x) {
            v = ties ? static_cast<double>(rng.uniform_int(0, 3)) : rng.gaussian();
        }
        const PatternSequence seq = extract_sequence(x, d);
        CHECK(seq.codes == naive_codes(x, d));
    }
}

TEST_CASE("count_range on the alternating example") {
    const PatternSequence seq{1, 1, {0, 1, 0, 1, 0}};
    const PairCounts counts = count_range(seq, 1, 5);
    CHECK(counts.total_pairs == 4);
    CHECK(counts.singles == std::vector<std::int64_t>{2, 2});
    CHECK(counts.pair(0, 1) == 2);
    CHECK(counts.pair(1, 0) == 2);
    CHECK(counts.pair(0, 0) == 0);
    CHECK(counts.pair(1, 1) == 0);
}

TEST_CASE("count_range smallest range counts exactly one pair") {
    const PatternSequence seq{1, 4, {1, 0, 1}};
    const PairCounts counts = count_range(seq, 5, 6);
    CHECK(counts.total_pairs == 1);
    CHECK(counts.pair(0, 1) == 1);
    CHECK(std::accumulate(counts.singles.begin(), counts.singles.end(), std::int64_t{0}) == 1);
}

TEST_CASE("count_range rejects bad ranges") {
    const PatternSequence seq{1, 1, {0, 1, 0}};
    CHECK_THROWS_AS(count_range(seq, 0, 2), std::invalid_argument);
    CHECK_THROWS_AS(count_range(seq, 1, 4), std::invalid_argument);
    CHECK_THROWS_AS(count_range(seq, 2, 2), std::invalid_argument);
}

TEST_CASE("row sums equal singles and counts are additive over splits") {
    Rng rng(4242);
    for (int trial = 0; trial < 25; ++trial) {
        const int d = static_cast<int>(rng.uniform_int(1, 3));
        const auto m = pattern_count(d);
        const auto len = static_cast<std::size_t>(rng.uniform_int(10, 400));
        PatternSequence seq{d, d, {}};
        for (std::size_t k = 0; k < len; ++k) {
            seq.codes.push_back(static_cast<std::int32_t>(rng.uniform_int(0, m - 1)));
        }
        const std::int64_t a = seq.start_time;
        const std::int64_t c = seq.end_time();
        const std::int64_t b = rng.uniform_int(a + 1, c - 1);

        const PairCounts left = count_range(seq, a, b);
        const PairCounts right = count_range(seq, b, c);
        const PairCounts whole = count_range(seq, a, c);
        const PairCounts merged = merge_counts(left, right);
        CHECK(merged.singles == whole.singles);
        CHECK(merged.pairs == whole.pairs);
        CHECK(merged.total_pairs == whole.total_pairs);

        for (std::int64_t i = 0; i < m; ++i) {
            std::int64_t row = 0;
            for (std::int64_t j = 0; j < m; ++j) {
                row += whole.pair(i, j);
            }
            CHECK(row == whole.singles[static_cast<std::size_t>(i)]);
        }
        CHECK(std::accumulate(whole.singles.begin(), whole.singles.end(), std::int64_t{0}) ==
              whole.total_pairs);
    }
}

TEST_CASE("iid input spreads patterns uniformly") {
    const int d = 2;
    const std::size_t n = 100000;
    Rng rng(555);
    std::vector<double> x(n);
    for (double& v : x) {
        v = rng.uniform01();
    }
    const PatternSequence seq = extract_sequence(x, d);
    const auto m = pattern_count(d);
    std::vector<std::int64_t> freq(static_cast<std::size_t>(m), 0);
    for (auto c : seq.codes) {
        ++freq[static_cast<std::size_t>(c)];
    }
    const double p = 1.0 / static_cast<double>(m);
    const auto n_codes = static_cast<double>(seq.codes.size());
    const double se = std::sqrt(p * (1.0 - p) / n_codes);
    for (auto f : freq) {
        CHECK(std::abs(static_cast<double>(f) / n_codes - p) < 5.0 * se);
    }
}
