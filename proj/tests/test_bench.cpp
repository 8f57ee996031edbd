#include "ceop/bench.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>

using namespace ceop;
using doctest::Approx;

namespace {

SingleTrialResult single_trial(std::int64_t trial, std::int64_t t_true, std::int64_t t_hat) {
    SingleTrialResult r;
    r.trial = trial;
    r.seed = static_cast<std::uint64_t>(trial) + 10;
    r.t_true = t_true;
    r.estimates.emplace_back("ceofop", t_hat);
    return r;
}

}  // namespace

TEST_CASE("single-change metrics on hand-made errors") {
    std::vector<SingleTrialResult> exact{single_trial(0, 5000, 5000),
                                         single_trial(1, 5100, 5100)};
    const SingleChangeMetrics perfect = single_change_metrics(exact, "ceofop", 256);
    CHECK(perfect.se == Approx(1.0));
    CHECK(perfect.bias == Approx(0.0));
    CHECK(perfect.rmse == Approx(0.0));

    std::vector<SingleTrialResult> symmetric{single_trial(0, 5000, 5100),
                                             single_trial(1, 5000, 4900)};
    const SingleChangeMetrics m = single_change_metrics(symmetric, "ceofop", 256);
    CHECK(m.se == Approx(1.0));
    CHECK(m.bias == Approx(0.0));
    CHECK(m.rmse == Approx(100.0));

    const SingleChangeMetrics strict = single_change_metrics(symmetric, "ceofop", 50);
    CHECK(strict.se == Approx(0.0));

    CHECK_THROWS_AS(single_change_metrics({}, "ceofop", 256), std::invalid_argument);
    CHECK_THROWS_AS(single_change_metrics(exact, "bdexp", 256), std::invalid_argument);
}

TEST_CASE("multi-change metrics count matches and surplus boundaries") {
    const std::vector<std::int64_t> truth{1000, 2000, 3000};
    MultiTrialResult exact;
    exact.trial = 0;
    exact.t_true = truth;
    exact.detected.emplace_back("ceofop", truth);

    const MultiChangeMetrics perfect =
        multi_change_metrics(std::vector<MultiTrialResult>{exact}, "ceofop", 256, 3);
    CHECK(perfect.se_k == std::vector<double>{1.0, 1.0, 1.0});
    CHECK(perfect.se_avg == Approx(1.0));
    CHECK(perfect.fcp == Approx(0.0));

    MultiTrialResult extra = exact;
    extra.detected.front().second.push_back(1500);  // spurious boundary
    const MultiChangeMetrics with_extra =
        multi_change_metrics(std::vector<MultiTrialResult>{extra}, "ceofop", 256, 3);
    CHECK(with_extra.se_avg == Approx(1.0));
    CHECK(with_extra.fcp == Approx(1.0));

    MultiTrialResult missing;
    missing.trial = 0;
    missing.t_true = truth;
    missing.detected.emplace_back("ceofop", std::vector<std::int64_t>{1010});
    const MultiChangeMetrics m =
        multi_change_metrics(std::vector<MultiTrialResult>{missing}, "ceofop", 256, 3);
    CHECK(m.se_k == std::vector<double>{1.0, 0.0, 0.0});
    CHECK(m.se_avg == Approx(1.0 / 3.0));
    CHECK(m.fcp == Approx(0.0));
}

TEST_CASE("plan presets carry the study geometry") {
    const BenchmarkPlan nl = BenchmarkPlan::preset("nl-3.95-4.00");
    CHECK(nl.mode == BenchMode::Single);
    CHECK(nl.kind == ProcessKind::NL);
    CHECK(nl.length == 80 * 256);
    CHECK(nl.change_centers == std::vector<std::int64_t>{20 * 256});
    CHECK(nl.r == std::vector<double>{3.95, 4.0});
    CHECK(nl.resolved_trials() == 1000);

    const BenchmarkPlan ar = BenchmarkPlan::preset("ar-4seg");
    CHECK(ar.mode == BenchMode::Multi);
    CHECK(ar.length == 100 * 256);
    CHECK(ar.change_centers ==
          std::vector<std::int64_t>{30 * 256, 70 * 256, 90 * 256});
    CHECK(ar.phi == std::vector<double>{0.3, 0.5, 0.1, 0.4});
    CHECK(ar.resolved_trials() == 500);

    const BenchmarkPlan small = BenchmarkPlan::preset("nl-4seg", 64);
    CHECK(small.length == 6400);
    CHECK(small.max_err == 64);
    CHECK(small.change_centers == std::vector<std::int64_t>{1920, 4480, 5760});

    CHECK_THROWS_AS(BenchmarkPlan::preset("nope"), std::invalid_argument);
}

TEST_CASE("plan json parsing applies presets and overrides") {
    const std::string text = R"({
        "schema": "ceop.plan.v1",
        "preset": "ar-0.1-0.4",
        "trials": 7,
        "statistics": ["ceofop", "bdcorr"]
    })";
    const BenchmarkPlan plan = BenchmarkPlan::from_json_text(text);
    CHECK(plan.name == "ar-0.1-0.4");
    CHECK(plan.trials == 7);
    CHECK(plan.statistics == std::vector<std::string>{"ceofop", "bdcorr"});
    CHECK(plan.phi == std::vector<double>{0.1, 0.4});

    const std::string custom = R"({
        "mode": "single",
        "order": 2,
        "window": 32,
        "max_err": 32,
        "trials": 3,
        "statistics": ["ceofop"],
        "process": {"kind": "NL", "r": [3.9, 4.0], "sigma": [0.2, 0.2],
                     "length": 4096, "change_centers": [1024]}
    })";
    const BenchmarkPlan c = BenchmarkPlan::from_json_text(custom);
    CHECK(c.kind == ProcessKind::NL);
    CHECK(c.order == 2);
    CHECK(c.length == 4096);

    CHECK_THROWS_AS(BenchmarkPlan::from_json_text("{"), std::invalid_argument);
    CHECK_THROWS_AS(BenchmarkPlan::from_json_text(R"({"bogus_key": 1})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(BenchmarkPlan::from_json_text(R"({
        "preset": "ar-0.1-0.4", "mode": "multi", "statistics": ["bdexp"]
    })"),
                    std::invalid_argument);
}

TEST_CASE("summary is a pure function of the trial csv") {
    BenchmarkPlan plan = BenchmarkPlan::preset("ar-0.1-0.4");
    plan.statistics = {"ceofop", "bdcorr"};
    const BenchmarkResult result = run_benchmark(plan, 12, 99, 2);
    const std::string csv = trials_to_csv(result);
    CHECK(csv.rfind("# schema=ceop.bench-trials-single.v1", 0) == 0);

    const BenchmarkResult reparsed = trials_from_csv(csv, result.plan, result.master_seed);
    REQUIRE(reparsed.single_trials.size() == result.single_trials.size());
    CHECK(summary_to_json(reparsed) == summary_to_json(result));

    for (const auto& stat : plan.statistics) {
        const auto a = single_change_metrics(result.single_trials, stat, plan.max_err);
        const auto b = single_change_metrics(reparsed.single_trials, stat, plan.max_err);
        CHECK(a.se == b.se);
        CHECK(a.bias == b.bias);
        CHECK(a.rmse == b.rmse);
        CHECK(a.rmse * a.rmse >= a.bias * a.bias - 1e-9);
    }
}

TEST_CASE("multi-mode csv round-trips the boundary lists") {
    BenchmarkPlan plan = BenchmarkPlan::preset("nl-4seg");
    plan.statistics = {"ceofop"};
    const BenchmarkResult result = run_benchmark(plan, 3, 1234, 2);
    const std::string csv = trials_to_csv(result);
    CHECK(csv.rfind("# schema=ceop.bench-trials-multi.v1", 0) == 0);

    const BenchmarkResult reparsed = trials_from_csv(csv, result.plan, result.master_seed);
    REQUIRE(reparsed.multi_trials.size() == result.multi_trials.size());
    for (std::size_t k = 0; k < reparsed.multi_trials.size(); ++k) {
        CHECK(reparsed.multi_trials[k].t_true == result.multi_trials[k].t_true);
        CHECK(reparsed.multi_trials[k].detected == result.multi_trials[k].detected);
    }
    CHECK(summary_to_json(reparsed) == summary_to_json(result));
}

TEST_CASE("benchmark output is independent of the thread count") {
    BenchmarkPlan plan = BenchmarkPlan::preset("nl-3.95-3.98");
    plan.statistics = {"ceofop", "bdexp"};
    const BenchmarkResult one = run_benchmark(plan, 10, 777, 1);
    const BenchmarkResult four = run_benchmark(plan, 10, 777, 4);
    CHECK(trials_to_csv(one) == trials_to_csv(four));
    CHECK(summary_to_json(one) == summary_to_json(four));

    const BenchmarkResult other_seed = run_benchmark(plan, 10, 778, 2);
    CHECK(trials_to_csv(one) != trials_to_csv(other_seed));
}

TEST_CASE("single-trial summary equals that trial's metrics") {
    BenchmarkPlan plan = BenchmarkPlan::preset("ar-0.1-0.5");
    plan.statistics = {"ceofop"};
    const BenchmarkResult result = run_benchmark(plan, 1, 5, 1);
    REQUIRE(result.single_trials.size() == 1);
    const auto& trial = result.single_trials.front();
    const SingleChangeMetrics m = single_change_metrics(result.single_trials, "ceofop", 256);
    const auto err = static_cast<double>(trial.estimates.front().second - trial.t_true);
    CHECK(m.bias == Approx(err));
    CHECK(m.rmse == Approx(std::abs(err)));
    CHECK(m.se == (std::abs(err) <= 256 ? 1.0 : 0.0));
}

TEST_CASE("estimation quality for the ar benchmark sits near its known level") {
    BenchmarkPlan plan = BenchmarkPlan::preset("ar-0.1-0.4");
    plan.statistics = {"ceofop", "bdcorr"};
    const BenchmarkResult result = run_benchmark(plan, 150, 2024, 2);
    const SingleChangeMetrics m = single_change_metrics(result.single_trials, "ceofop", 256);
    CHECK(m.se > 0.70);
    CHECK(std::abs(m.bias) < 120.0);
    CHECK(m.rmse < 700.0);
    // The lagged-product baseline dominates on this linear process.
    const SingleChangeMetrics bd = single_change_metrics(result.single_trials, "bdcorr", 256);
    CHECK(bd.se > m.se);
    CHECK(std::abs(bd.bias - 21.0) < 40.0);
}

TEST_CASE("estimation quality improves with series length") {
    BenchmarkPlan short_plan = BenchmarkPlan::preset("nl-3.95-3.98");
    short_plan.statistics = {"ceofop"};
    short_plan.length = 24 * 256;
    short_plan.change_centers = {6 * 256};
    BenchmarkPlan long_plan = BenchmarkPlan::preset("nl-3.95-3.98");
    long_plan.statistics = {"ceofop"};

    const auto short_se =
        single_change_metrics(run_benchmark(short_plan, 60, 31, 2).single_trials, "ceofop", 256)
            .se;
    const auto long_se =
        single_change_metrics(run_benchmark(long_plan, 60, 31, 2).single_trials, "ceofop", 256)
            .se;
    CHECK(long_se > short_se);
}
