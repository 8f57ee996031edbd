#include "ceop/detection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <stdexcept>

#include "ceop/parallel.hpp"

namespace ceop {

int default_thread_count() {
    if (const char* env = std::getenv("CEOP_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) {
            return n;
        }
    }
    return 1;
}

std::int64_t default_t_min(int order) {
    return pattern_count(order) * (order + 1);
}

std::int64_t min_series_values(int order) {
    return 2 * default_t_min(order) + 1;
}

void DetectionConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("detection config: alpha must lie in (0, 1)");
    }
    if (t_min < 0) {
        throw std::invalid_argument("detection config: negative t_min");
    }
    if (n_boot && *n_boot == 0) {
        throw std::invalid_argument("detection config: n_boot override must be positive");
    }
    if (threads < 1) {
        throw std::invalid_argument("detection config: thread count must be positive");
    }
}

std::size_t bootstrap_count(double alpha) {
    // Nudged so that e.g. alpha = 0.05 yields exactly 100.
    return static_cast<std::size_t>(std::floor(5.0 / alpha + 1e-9));
}

double bootstrap_threshold(std::vector<double> maxima, double alpha) {
    if (maxima.empty()) {
        throw std::invalid_argument("bootstrap_threshold: no replicates");
    }
    std::sort(maxima.begin(), maxima.end(), std::greater<>());
    const auto n = maxima.size();
    auto idx = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(n) + 1e-9));
    idx = std::clamp<std::size_t>(idx, 1, n);
    return maxima[idx - 1];
}

std::int64_t map_to_series_time(std::int64_t pattern_time, int /*order*/) {
    return pattern_time;
}

namespace {

// Single-range detection for the conditional-entropy statistic. The range
// [a, b] is in pattern time; the patterns over it are exactly those of the
// values x(a - d .. b), which is also the unit the surrogates reshuffle.
RangeDetection detect_ceofop_range(std::span<const double> x, int order, std::int64_t a,
                                   std::int64_t b, double alpha, std::int64_t t_min,
                                   std::size_t n_boot_override, int threads,
                                   std::uint64_t call_seed, bool keep_profile) {
    RangeDetection out;
    SegmentDecision& dec = out.decision;
    dec.seg_start = a;
    dec.seg_end = b;

    if (b - a < 2 * t_min) {
        dec.too_short = true;
        return out;
    }

    const auto values = x.subspan(static_cast<std::size_t>(a - order),
                                  static_cast<std::size_t>(b - a + order) + 1);
    const PatternSequence seq = extract_sequence(values, order);
    StatProfile profile = ceofop_profile_codes(seq.codes, order, a, t_min);
    if (profile.empty()) {
        dec.too_short = true;
        return out;
    }
    dec.candidate = profile.argmax_t;
    dec.stat_value = profile.max_value;

    const std::size_t n_boot = n_boot_override > 0 ? n_boot_override : bootstrap_count(alpha);
    dec.n_boot = n_boot;

    std::vector<double> maxima(n_boot);
    const auto block_len = static_cast<std::int64_t>(order) + 1;
    parallel_for(n_boot, threads, [&](std::size_t rep) {
        Rng rng(derive_seed(call_seed, rep));
        const auto surrogate = block_shuffle(values, block_len, rng);
        const PatternSequence boot_seq = extract_sequence(surrogate, order);
        maxima[rep] = ceofop_profile_codes(boot_seq.codes, order, a, t_min).max_value;
    });

    dec.threshold = bootstrap_threshold(std::move(maxima), alpha);
    dec.detected = dec.stat_value >= dec.threshold;
    if (keep_profile) {
        out.profile = std::move(profile);
    }
    return out;
}

RangeDetector make_ceofop_detector(std::span<const double> x, int order,
                                   const DetectionConfig& config) {
    const std::int64_t t_min = config.t_min > 0 ? config.t_min : default_t_min(order);
    const std::size_t n_boot_override = config.n_boot.value_or(0);
    return [x, order, t_min, n_boot_override, threads = config.threads,
            keep = config.keep_profiles](std::int64_t a, std::int64_t b, double alpha,
                                         std::uint64_t call_seed) {
        return detect_ceofop_range(x, order, a, b, alpha, t_min, n_boot_override, threads,
                                   call_seed, keep);
    };
}

void check_series(std::span<const double> x, int order) {
    if (order < 1 || order > kMaxPairOrder) {
        throw std::invalid_argument("detect: unsupported order");
    }
    if (x.size() < static_cast<std::size_t>(order) + 2) {
        throw std::invalid_argument("detect: series shorter than order + 2");
    }
}

}  // namespace

DetectionReport detect_single_report(std::span<const double> x, int order,
                                     const DetectionConfig& config) {
    config.validate();
    check_series(x, order);
    const RangeDetector detector = make_ceofop_detector(x, order, config);

    DetectionReport report;
    report.order = order;
    report.alpha = config.alpha;
    report.master_seed = config.master_seed;

    const auto end_time = static_cast<std::int64_t>(x.size()) - 1;
    RangeDetection det =
        detector(order, end_time, config.alpha, derive_seed(config.master_seed, 0));
    det.decision.phase = "single";
    if (det.decision.detected) {
        report.change_points.push_back(map_to_series_time(det.decision.candidate, order));
    }
    report.n_segments = static_cast<std::int64_t>(report.change_points.size()) + 1;
    report.decisions.push_back(std::move(det.decision));
    if (config.keep_profiles) {
        report.profiles.push_back(std::move(det.profile));
    }
    return report;
}

std::optional<std::int64_t> detect_single(std::span<const double> x, int order,
                                          const DetectionConfig& config) {
    const DetectionReport report = detect_single_report(x, order, config);
    if (report.change_points.empty()) {
        return std::nullopt;
    }
    return report.change_points.front();
}

DetectionReport segment_and_verify(std::int64_t domain_start, std::int64_t domain_end,
                                   std::int64_t gap, const RangeDetector& detector,
                                   const DetectionConfig& config) {
    config.validate();
    DetectionReport report;
    report.alpha = config.alpha;
    report.master_seed = config.master_seed;

    // Boundaries with sentinels; segment k covers [B_k + gap, B_k+1].
    std::vector<std::int64_t> bounds{domain_start - gap, domain_end};
    std::uint64_t call_counter = 0;

    const auto examine = [&](std::int64_t a, std::int64_t b, double alpha, const char* phase) {
        RangeDetection det =
            detector(a, b, alpha, derive_seed(config.master_seed, call_counter++));
        det.decision.phase = phase;
        report.decisions.push_back(det.decision);
        if (config.keep_profiles) {
            report.profiles.push_back(std::move(det.profile));
        }
        return report.decisions.back();
    };

    // Step 1: preliminary boundaries at doubled false-alarm level.
    std::size_t k = 0;
    while (k + 1 < bounds.size()) {
        const SegmentDecision dec =
            examine(bounds[k] + gap, bounds[k + 1], 2.0 * config.alpha, "step1");
        if (dec.detected) {
            bounds.insert(bounds.begin() + static_cast<std::ptrdiff_t>(k) + 1, dec.candidate);
        } else {
            ++k;
        }
    }

    // Step 2: verify each interior boundary on the union of its neighbours.
    k = 0;
    while (k + 2 < bounds.size()) {
        const SegmentDecision dec =
            examine(bounds[k] + gap, bounds[k + 2], config.alpha, "step2");
        if (dec.detected) {
            bounds[k + 1] = dec.candidate;
            ++k;
        } else {
            bounds.erase(bounds.begin() + static_cast<std::ptrdiff_t>(k) + 1);
        }
    }

    report.change_points.assign(bounds.begin() + 1, bounds.end() - 1);
    report.n_segments = static_cast<std::int64_t>(bounds.size()) - 1;
    return report;
}

DetectionReport detect_multiple(std::span<const double> x, int order,
                                const DetectionConfig& config) {
    config.validate();
    check_series(x, order);
    const RangeDetector detector = make_ceofop_detector(x, order, config);
    const auto end_time = static_cast<std::int64_t>(x.size()) - 1;
    DetectionReport report = segment_and_verify(order, end_time, order, detector, config);
    report.order = order;
    for (auto& cp : report.change_points) {
        cp = map_to_series_time(cp, order);
    }
    return report;
}

}  // namespace ceop
