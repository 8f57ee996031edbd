#include "ceop/ordinal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ceop {

namespace {

void require(bool cond, const char* message) {
    if (!cond) {
        throw std::invalid_argument(message);
    }
}

// Lexicographic rank of a permutation of {0, .., n-1}.
std::int32_t lehmer_rank(std::span<const int> perm) {
    const int n = static_cast<int>(perm.size());
    std::int64_t rank = 0;
    for (int i = 0; i < n; ++i) {
        int smaller_after = 0;
        for (int j = i + 1; j < n; ++j) {
            if (perm[j] < perm[i]) {
                ++smaller_after;
            }
        }
        rank += smaller_after * factorial(n - 1 - i);
    }
    return static_cast<std::int32_t>(rank);
}

// Inverse of lehmer_rank.
std::vector<int> lehmer_unrank(std::int32_t rank, int n) {
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> perm(n);
    std::int64_t rest = rank;
    for (int i = 0; i < n; ++i) {
        const std::int64_t block = factorial(n - 1 - i);
        const auto idx = static_cast<std::size_t>(rest / block);
        rest %= block;
        perm[i] = pool[idx];
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
    }
    return perm;
}

// Code from the ascending argsort of the window: sigma is the index order by
// (value, index) ascending, which is exactly the reversed pattern permutation.
std::int32_t code_from_ascending(std::span<const int> sigma) {
    return lehmer_rank(sigma);
}

}  // namespace

std::int64_t factorial(int n) {
    require(n >= 0 && n <= 20, "factorial: argument out of range");
    std::int64_t f = 1;
    for (int k = 2; k <= n; ++k) {
        f *= k;
    }
    return f;
}

std::int64_t pattern_count(int order) {
    return factorial(order + 1);
}

OrdinalPattern encode_pattern(std::span<const double> window) {
    require(window.size() >= 2, "encode_pattern: window must hold at least 2 values");
    require(window.size() <= static_cast<std::size_t>(kMaxPatternOrder) + 1,
            "encode_pattern: window longer than supported order");
    for (double v : window) {
        require(std::isfinite(v), "encode_pattern: non-finite value in window");
    }
    const int d = static_cast<int>(window.size()) - 1;
    std::array<int, kMaxPatternOrder + 1> sigma{};
    std::iota(sigma.begin(), sigma.begin() + d + 1, 0);
    // Stable ascending sort: ties keep the smaller index first, which makes
    // the reversed order place the larger index first among equal values.
    std::stable_sort(sigma.begin(), sigma.begin() + d + 1,
                     [&](int a, int b) { return window[static_cast<std::size_t>(a)] <
                                                window[static_cast<std::size_t>(b)]; });
    return OrdinalPattern{d, code_from_ascending({sigma.data(), static_cast<std::size_t>(d + 1)})};
}

std::vector<int> decode_pattern(const OrdinalPattern& pattern) {
    require(pattern.order >= 1 && pattern.order <= kMaxPatternOrder,
            "decode_pattern: unsupported order");
    require(pattern.code >= 0 && pattern.code < pattern_count(pattern.order),
            "decode_pattern: code out of range");
    std::vector<int> sigma = lehmer_unrank(pattern.code, pattern.order + 1);
    std::reverse(sigma.begin(), sigma.end());
    return sigma;
}

PatternSequence extract_sequence(std::span<const double> x, int order) {
    require(order >= 1 && order <= kMaxPatternOrder, "extract_sequence: unsupported order");
    require(x.size() >= static_cast<std::size_t>(order) + 1,
            "extract_sequence: series shorter than order + 1");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) {
            throw std::invalid_argument("extract_sequence: non-finite value at index " +
                                        std::to_string(i));
        }
    }

    const int d = order;
    const std::size_t n = x.size();
    PatternSequence seq;
    seq.order = d;
    seq.start_time = d;
    seq.codes.reserve(n - static_cast<std::size_t>(d));

    // ranks[p] is the ascending rank (with index tie-break) of the value at
    // window position p; sigma is its inverse.
    std::array<int, kMaxPatternOrder + 1> ranks{};
    std::array<int, kMaxPatternOrder + 1> sigma{};

    for (int p = 0; p <= d; ++p) {
        int r = 0;
        for (int q = 0; q <= d; ++q) {
            if (x[static_cast<std::size_t>(q)] < x[static_cast<std::size_t>(p)] ||
                (x[static_cast<std::size_t>(q)] == x[static_cast<std::size_t>(p)] && q < p)) {
                ++r;
            }
        }
        ranks[static_cast<std::size_t>(p)] = r;
    }

    auto emit = [&]() {
        for (int p = 0; p <= d; ++p) {
            sigma[static_cast<std::size_t>(ranks[static_cast<std::size_t>(p)])] = p;
        }
        seq.codes.push_back(code_from_ascending({sigma.data(), static_cast<std::size_t>(d + 1)}));
    };
    emit();

    for (std::size_t t = static_cast<std::size_t>(d) + 1; t < n; ++t) {
        // Drop the oldest element, shift window positions, insert the new one.
        const int gone = ranks[0];
        for (int p = 0; p < d; ++p) {
            int r = ranks[static_cast<std::size_t>(p + 1)];
            ranks[static_cast<std::size_t>(p)] = r > gone ? r - 1 : r;
        }
        const double incoming = x[t];
        int r_new = 0;
        for (std::size_t q = t - static_cast<std::size_t>(d); q < t; ++q) {
            // Earlier index and equal value ranks below the newcomer.
            if (x[q] <= incoming) {
                ++r_new;
            }
        }
        for (int p = 0; p < d; ++p) {
            if (ranks[static_cast<std::size_t>(p)] >= r_new) {
                ++ranks[static_cast<std::size_t>(p)];
            }
        }
        ranks[static_cast<std::size_t>(d)] = r_new;
        emit();
    }
    return seq;
}

PairCounts count_range(const PatternSequence& seq, std::int64_t t_start, std::int64_t t_end) {
    require(seq.order >= 1 && seq.order <= kMaxPairOrder, "count_range: unsupported order");
    require(t_start >= seq.start_time && t_end <= seq.end_time(),
            "count_range: range outside the sequence");
    require(t_end - t_start >= 1, "count_range: range must contain at least one pair");

    const auto m = pattern_count(seq.order);
    PairCounts counts;
    counts.order = seq.order;
    counts.singles.assign(static_cast<std::size_t>(m), 0);
    counts.pairs.assign(static_cast<std::size_t>(m * m), 0);
    counts.total_pairs = t_end - t_start;

    const auto* codes = seq.codes.data() + (t_start - seq.start_time);
    const auto n_pairs = static_cast<std::size_t>(t_end - t_start);
    for (std::size_t l = 0; l < n_pairs; ++l) {
        const auto i = static_cast<std::int64_t>(codes[l]);
        const auto j = static_cast<std::int64_t>(codes[l + 1]);
        ++counts.singles[static_cast<std::size_t>(i)];
        ++counts.pairs[static_cast<std::size_t>(i * m + j)];
    }
    return counts;
}

PairCounts merge_counts(const PairCounts& a, const PairCounts& b) {
    require(a.order == b.order, "merge_counts: order mismatch");
    PairCounts out = a;
    for (std::size_t k = 0; k < out.singles.size(); ++k) {
        out.singles[k] += b.singles[k];
    }
    for (std::size_t k = 0; k < out.pairs.size(); ++k) {
        out.pairs[k] += b.pairs[k];
    }
    out.total_pairs += b.total_pairs;
    return out;
}

}  // namespace ceop
