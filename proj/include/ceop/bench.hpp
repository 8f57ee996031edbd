#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ceop/processes.hpp"

namespace ceop {

enum class BenchMode { Single, Multi };

/**
 * @brief A declarative benchmark description.
 *
 * Single mode measures how well each statistic's argmax estimates one planted
 * change-point; multi mode runs the full two-step detection and scores the
 * boundary sets. See the README for the JSON schema and the preset names.
 */
struct BenchmarkPlan {
    std::string name = "custom";
    BenchMode mode = BenchMode::Single;
    int order = 3;
    std::int64_t trials = 0;  // 0 -> 1000 (single) / 500 (multi)
    std::int64_t window = 256;
    std::int64_t max_err = 256;
    double alpha = 0.05;
    // Edge weighting for the BD statistics. 0.5 damps the small-sample mean
    // noise at the range ends and reproduces the published comparison bias.
    double bd_delta = 0.5;
    std::vector<std::string> statistics;  // of "ceofop", "bdexp", "bdcorr"

    ProcessKind kind = ProcessKind::AR;
    std::vector<double> phi;
    std::vector<double> r;
    std::vector<double> sigma;
    std::vector<std::int64_t> change_centers;
    std::int64_t length = 0;

    std::int64_t resolved_trials() const;
    void validate() const;

    /// Builds a named plan from the catalogue of study processes; the window
    /// fixes the plan geometry (length 80 W or 100 W, centers, max_err).
    static BenchmarkPlan preset(const std::string& name, std::int64_t window = 256);
    /// Parses the JSON plan format; a "preset" key seeds the plan and the
    /// remaining keys override individual fields.
    static BenchmarkPlan from_json_text(const std::string& text);
};

struct SingleTrialResult {
    std::int64_t trial = 0;
    std::uint64_t seed = 0;
    std::int64_t t_true = 0;
    // (statistic, argmax estimate), in plan order
    std::vector<std::pair<std::string, std::int64_t>> estimates;
};

struct MultiTrialResult {
    std::int64_t trial = 0;
    std::uint64_t seed = 0;
    std::vector<std::int64_t> t_true;
    // (statistic, detected boundaries), in plan order
    std::vector<std::pair<std::string, std::vector<std::int64_t>>> detected;
};

struct SingleChangeMetrics {
    double se = 0.0;    // fraction with |err| <= max_err
    double bias = 0.0;  // mean err
    double rmse = 0.0;
    std::int64_t n = 0;
};

struct MultiChangeMetrics {
    std::vector<double> se_k;  // one per true change-point
    double se_avg = 0.0;
    double fcp = 0.0;  // mean surplus boundaries per trial
    std::int64_t n = 0;
};

/// err_j = estimate - truth per trial; se is the fraction within max_err.
/// Throws on empty input or unknown statistic name.
SingleChangeMetrics single_change_metrics(std::span<const SingleTrialResult> results,
                                          const std::string& statistic, std::int64_t max_err);

/// err_k = distance from truth k to the nearest detected boundary; fcp is the
/// mean of (#detected - #true changes matched within max_err).
MultiChangeMetrics multi_change_metrics(std::span<const MultiTrialResult> results,
                                        const std::string& statistic, std::int64_t max_err,
                                        std::size_t n_changes);

struct BenchmarkResult {
    BenchmarkPlan plan;  // echo with resolved trial count
    std::uint64_t master_seed = 0;
    std::vector<SingleTrialResult> single_trials;
    std::vector<MultiTrialResult> multi_trials;
};

/**
 * @brief Runs the plan: n_trials seeded realizations, each scored by every
 *        statistic in the plan.
 *
 * Trials run in parallel with per-trial derived seeds and are reduced in
 * trial order, so the result depends only on (plan, n_trials, master_seed).
 * n_trials of 0 uses the plan's trial count.
 */
BenchmarkResult run_benchmark(const BenchmarkPlan& plan, std::int64_t n_trials,
                              std::uint64_t master_seed, int threads);

/// Per-trial rows as CSV (schema comment first, then a header line).
std::string trials_to_csv(const BenchmarkResult& result);

/// Metric summary as pretty-printed JSON with a schema field.
std::string summary_to_json(const BenchmarkResult& result);

/// Rebuilds trial rows from the CSV emitted by trials_to_csv; the summary is
/// a pure function of these rows.
BenchmarkResult trials_from_csv(const std::string& csv_text, const BenchmarkPlan& plan,
                                std::uint64_t master_seed);

}  // namespace ceop
