#include "ceop/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ceop/entropy.hpp"

namespace ceop {

namespace {

// Compensated accumulator; keeps the incremental profile within 1e-9 of the
// naive recomputation even over long sequences.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

// g = sum n_ij ln n_ij - sum n_i ln n_i over a count table, so that
// T * eCE = -g.
double count_g(const PairCounts& counts) {
    double g = 0.0;
    for (std::int64_t n : counts.pairs) {
        g += nlogn(n);
    }
    for (std::int64_t n : counts.singles) {
        g -= nlogn(n);
    }
    return g;
}

void record_max(StatProfile& profile) {
    for (std::size_t k = 0; k < profile.s_values.size(); ++k) {
        if (profile.argmax_t < 0 || profile.s_values[k] > profile.max_value) {
            profile.max_value = profile.s_values[k];
            profile.argmax_t = profile.t_values[k];
        }
    }
}

double mean_diff_stat(double left_sum, double right_sum, std::int64_t t, std::int64_t n,
                      double delta) {
    const double left_mean = left_sum / static_cast<double>(t);
    const double right_mean = right_sum / static_cast<double>(n - t);
    const double weight =
        static_cast<double>(t) * static_cast<double>(n - t) / (static_cast<double>(n) * static_cast<double>(n));
    return std::pow(weight, delta) * std::abs(left_mean - right_mean);
}

StatProfile mean_diff_profile(std::span<const double> x, double delta, std::int64_t t_lo,
                              std::int64_t t_hi) {
    const auto n = static_cast<std::int64_t>(x.size());
    StatProfile profile;
    if (n < 2) {
        return profile;
    }
    t_lo = std::max<std::int64_t>(t_lo, 1);
    t_hi = std::min<std::int64_t>(t_hi, n - 1);
    if (t_lo > t_hi) {
        return profile;
    }
    profile.t_values.reserve(static_cast<std::size_t>(t_hi - t_lo + 1));
    profile.s_values.reserve(static_cast<std::size_t>(t_hi - t_lo + 1));

    double total = 0.0;
    for (double v : x) {
        total += v;
    }
    double left_sum = 0.0;
    for (std::int64_t k = 0; k < t_lo; ++k) {
        left_sum += x[static_cast<std::size_t>(k)];
    }
    for (std::int64_t t = t_lo; t <= t_hi; ++t) {
        profile.t_values.push_back(t);
        profile.s_values.push_back(mean_diff_stat(left_sum, total - left_sum, t, n, delta));
        left_sum += x[static_cast<std::size_t>(t)];
    }
    record_max(profile);
    return profile;
}

std::vector<double> lagged_products(std::span<const double> x) {
    if (x.size() < 2) {
        throw std::invalid_argument("bd_corr: series must hold at least 2 values");
    }
    std::vector<double> y(x.size() - 1);
    for (std::size_t k = 0; k + 1 < x.size(); ++k) {
        y[k] = x[k] * x[k + 1];
    }
    return y;
}

}  // namespace

double ceofop_at(const PatternSequence& seq, std::int64_t t) {
    const std::int64_t a = seq.start_time;
    const std::int64_t b = seq.end_time();
    const int d = seq.order;
    if (t <= a || t >= b - d) {
        throw std::invalid_argument("ceofop_at: candidate time out of range");
    }
    const double full = ece(count_range(seq, a, b));
    const PairCounts left = count_range(seq, a, t);
    const PairCounts right = count_range(seq, t + d, b);
    return static_cast<double>(b - a - d) * full -
           static_cast<double>(left.total_pairs) * ece(left) -
           static_cast<double>(right.total_pairs) * ece(right);
}

StatProfile ceofop_profile(const PatternSequence& seq, std::int64_t t_min_offset) {
    return ceofop_profile_codes(seq.codes, seq.order, seq.start_time, t_min_offset);
}

StatProfile ceofop_profile_codes(std::span<const std::int32_t> codes, int order,
                                 std::int64_t first_time, std::int64_t t_min_offset) {
    if (order < 1 || order > kMaxPairOrder) {
        throw std::invalid_argument("ceofop_profile: unsupported order");
    }
    if (t_min_offset < 0) {
        throw std::invalid_argument("ceofop_profile: negative offset");
    }
    const int d = order;
    const std::int64_t a = first_time;
    const std::int64_t b = a + static_cast<std::int64_t>(codes.size()) - 1;

    StatProfile profile;
    const std::int64_t t_lo = a + std::max<std::int64_t>(t_min_offset, 1);
    const std::int64_t t_hi = b - std::max<std::int64_t>(t_min_offset, d + 1);
    if (codes.size() < 2 || t_lo > t_hi) {
        return profile;
    }
    profile.t_values.reserve(static_cast<std::size_t>(t_hi - t_lo + 1));
    profile.s_values.reserve(static_cast<std::size_t>(t_hi - t_lo + 1));

    const auto m = pattern_count(d);
    const auto code_at = [&](std::int64_t t) {
        return static_cast<std::int64_t>(codes[static_cast<std::size_t>(t - a)]);
    };

    std::vector<std::int64_t> left_single(static_cast<std::size_t>(m), 0);
    std::vector<std::int64_t> left_pair(static_cast<std::size_t>(m * m), 0);
    std::vector<std::int64_t> right_single(static_cast<std::size_t>(m), 0);
    std::vector<std::int64_t> right_pair(static_cast<std::size_t>(m * m), 0);

    KahanSum g_left;
    KahanSum g_right;

    const auto add_pair = [&](std::vector<std::int64_t>& single, std::vector<std::int64_t>& pair,
                              KahanSum& g, std::int64_t i, std::int64_t j) {
        auto& np = pair[static_cast<std::size_t>(i * m + j)];
        g.add(nlogn(np + 1) - nlogn(np));
        ++np;
        auto& ns = single[static_cast<std::size_t>(i)];
        g.add(nlogn(ns) - nlogn(ns + 1));
        ++ns;
    };
    const auto remove_pair = [&](std::vector<std::int64_t>& single, std::vector<std::int64_t>& pair,
                                 KahanSum& g, std::int64_t i, std::int64_t j) {
        auto& np = pair[static_cast<std::size_t>(i * m + j)];
        g.add(nlogn(np - 1) - nlogn(np));
        --np;
        auto& ns = single[static_cast<std::size_t>(i)];
        g.add(nlogn(ns) - nlogn(ns - 1));
        --ns;
    };

    // Whole-range term: -(b - a - d)/(b - a) * g_full, a constant.
    double g_full = 0.0;
    {
        std::vector<std::int64_t> full_single(static_cast<std::size_t>(m), 0);
        std::vector<std::int64_t> full_pair(static_cast<std::size_t>(m * m), 0);
        for (std::size_t l = 0; l + 1 < codes.size(); ++l) {
            const auto i = static_cast<std::int64_t>(codes[l]);
            const auto j = static_cast<std::int64_t>(codes[l + 1]);
            ++full_single[static_cast<std::size_t>(i)];
            ++full_pair[static_cast<std::size_t>(i * m + j)];
        }
        for (std::int64_t n : full_pair) {
            g_full += nlogn(n);
        }
        for (std::int64_t n : full_single) {
            g_full -= nlogn(n);
        }
    }
    const double full_term =
        -g_full * static_cast<double>(b - a - d) / static_cast<double>(b - a);

    for (std::int64_t l = a; l < t_lo; ++l) {
        add_pair(left_single, left_pair, g_left, code_at(l), code_at(l + 1));
    }
    for (std::int64_t l = t_lo + d; l < b; ++l) {
        add_pair(right_single, right_pair, g_right, code_at(l), code_at(l + 1));
    }

    for (std::int64_t t = t_lo;; ++t) {
        profile.t_values.push_back(t);
        profile.s_values.push_back(full_term + g_left.sum + g_right.sum);
        if (t == t_hi) {
            break;
        }
        add_pair(left_single, left_pair, g_left, code_at(t), code_at(t + 1));
        remove_pair(right_single, right_pair, g_right, code_at(t + d), code_at(t + d + 1));
    }
    record_max(profile);
    return profile;
}

double lr_statistic(const PatternSequence& seq, std::int64_t t) {
    const std::int64_t a = seq.start_time;
    const std::int64_t b = seq.end_time();
    const int d = seq.order;
    if (t <= a || t >= b - d) {
        throw std::invalid_argument("lr_statistic: candidate time out of range");
    }
    const double g_full = count_g(count_range(seq, a, b));
    const double g_left = count_g(count_range(seq, a, t));
    const double g_right = count_g(count_range(seq, t + d, b));
    return 2.0 * (g_left + g_right - g_full);
}

double bd_exp(std::span<const double> x, std::int64_t t, double delta) {
    const auto n = static_cast<std::int64_t>(x.size());
    if (t < 1 || t >= n) {
        throw std::invalid_argument("bd_exp: split out of range");
    }
    double left_sum = 0.0;
    double right_sum = 0.0;
    for (std::int64_t k = 0; k < n; ++k) {
        (k < t ? left_sum : right_sum) += x[static_cast<std::size_t>(k)];
    }
    return mean_diff_stat(left_sum, right_sum, t, n, delta);
}

double bd_corr(std::span<const double> x, std::int64_t t, double delta) {
    const std::vector<double> y = lagged_products(x);
    return bd_exp(y, t, delta);
}

StatProfile bd_exp_profile(std::span<const double> x, double delta, std::int64_t t_lo,
                           std::int64_t t_hi) {
    return mean_diff_profile(x, delta, t_lo, t_hi);
}

StatProfile bd_corr_profile(std::span<const double> x, double delta, std::int64_t t_lo,
                            std::int64_t t_hi) {
    const std::vector<double> y = lagged_products(x);
    return mean_diff_profile(y, delta, t_lo, t_hi);
}

}  // namespace ceop
