#include "ceop/bench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ceop/detection.hpp"
#include "ceop/parallel.hpp"
#include "ceop/statistics.hpp"

namespace ceop {

namespace {

using nlohmann::json;

const std::vector<std::string> kSingleStats{"ceofop", "bdexp", "bdcorr"};
const std::vector<std::string> kMultiStats{"ceofop", "bdcorr"};

bool known_stat(const std::string& s, const std::vector<std::string>& allowed) {
    return std::find(allowed.begin(), allowed.end(), s) != allowed.end();
}

ProcessSpec spec_with_change_points(const BenchmarkPlan& plan,
                                    std::vector<std::int64_t> change_points) {
    if (plan.kind == ProcessKind::AR) {
        return ProcessSpec::ar(plan.phi, std::move(change_points), plan.length);
    }
    return ProcessSpec::nl(plan.r, plan.sigma, std::move(change_points), plan.length);
}

// Two-step boundary detection for the correlation statistic: the same
// segmentation and block-bootstrap machinery, applied to the lagged-product
// series.
std::vector<std::int64_t> bd_corr_detect_multiple(std::span<const double> x, int order,
                                                  double delta, const DetectionConfig& config) {
    std::vector<double> y(x.size() - 1);
    for (std::size_t k = 0; k + 1 < x.size(); ++k) {
        y[k] = x[k] * x[k + 1];
    }
    const std::int64_t t_min = config.t_min > 0 ? config.t_min : default_t_min(order);
    const auto block_len = static_cast<std::int64_t>(order) + 1;
    const std::size_t n_boot_override = config.n_boot.value_or(0);

    const RangeDetector detector = [&y, t_min, delta, block_len, n_boot_override,
                                    threads = config.threads](std::int64_t a, std::int64_t b,
                                                              double alpha,
                                                              std::uint64_t call_seed) {
        RangeDetection out;
        SegmentDecision& dec = out.decision;
        dec.seg_start = a;
        dec.seg_end = b;
        if (b - a < 2 * t_min) {
            dec.too_short = true;
            return out;
        }
        const auto sub = std::span<const double>(y).subspan(
            static_cast<std::size_t>(a), static_cast<std::size_t>(b - a) + 1);
        const StatProfile profile = bd_exp_profile(sub, delta, t_min, (b - a) - t_min);
        if (profile.empty()) {
            dec.too_short = true;
            return out;
        }
        dec.candidate = a + profile.argmax_t;
        dec.stat_value = profile.max_value;

        const std::size_t n_boot = n_boot_override > 0 ? n_boot_override : bootstrap_count(alpha);
        dec.n_boot = n_boot;
        std::vector<double> maxima(n_boot);
        parallel_for(n_boot, threads, [&](std::size_t rep) {
            Rng rng(derive_seed(call_seed, rep));
            const auto surrogate = block_shuffle(sub, block_len, rng);
            maxima[rep] =
                bd_exp_profile(surrogate, delta, t_min, (b - a) - t_min).max_value;
        });
        dec.threshold = bootstrap_threshold(std::move(maxima), alpha);
        dec.detected = dec.stat_value >= dec.threshold;
        return out;
    };

    DetectionConfig cfg = config;
    cfg.keep_profiles = false;
    const DetectionReport report =
        segment_and_verify(0, static_cast<std::int64_t>(y.size()) - 1, 0, detector, cfg);
    return report.change_points;
}

SingleTrialResult run_single_trial(const BenchmarkPlan& plan, std::int64_t trial,
                                   std::uint64_t master_seed) {
    const std::uint64_t trial_seed = derive_seed(master_seed, static_cast<std::uint64_t>(trial));
    Rng placement(derive_seed(trial_seed, 1));
    const auto cps =
        random_change_points(plan.change_centers, plan.window, plan.length, placement);
    const ProcessSpec spec = spec_with_change_points(plan, cps);
    const std::vector<double> x = plan.kind == ProcessKind::AR
                                      ? gen_ar(spec, derive_seed(trial_seed, 2))
                                      : gen_nl(spec, derive_seed(trial_seed, 2));

    SingleTrialResult result;
    result.trial = trial;
    result.seed = trial_seed;
    result.t_true = cps.front();

    const std::int64_t t_min = default_t_min(plan.order);
    const auto n = static_cast<std::int64_t>(x.size());
    PatternSequence seq;
    for (const std::string& stat : plan.statistics) {
        std::int64_t estimate = -1;
        if (stat == "ceofop") {
            if (seq.codes.empty()) {
                seq = extract_sequence(x, plan.order);
            }
            estimate = ceofop_profile(seq, t_min).argmax_t;
        } else if (stat == "bdexp") {
            estimate = bd_exp_profile(x, plan.bd_delta, t_min, n - t_min).argmax_t;
        } else if (stat == "bdcorr") {
            estimate = bd_corr_profile(x, plan.bd_delta, t_min, (n - 1) - t_min).argmax_t;
        }
        result.estimates.emplace_back(stat, estimate);
    }
    return result;
}

MultiTrialResult run_multi_trial(const BenchmarkPlan& plan, std::int64_t trial,
                                 std::uint64_t master_seed) {
    const std::uint64_t trial_seed = derive_seed(master_seed, static_cast<std::uint64_t>(trial));
    Rng placement(derive_seed(trial_seed, 1));
    const auto cps =
        random_change_points(plan.change_centers, plan.window, plan.length, placement);
    const ProcessSpec spec = spec_with_change_points(plan, cps);
    const std::vector<double> x = plan.kind == ProcessKind::AR
                                      ? gen_ar(spec, derive_seed(trial_seed, 2))
                                      : gen_nl(spec, derive_seed(trial_seed, 2));

    MultiTrialResult result;
    result.trial = trial;
    result.seed = trial_seed;
    result.t_true = cps;

    std::uint64_t stat_stream = 3;
    for (const std::string& stat : plan.statistics) {
        DetectionConfig cfg;
        cfg.alpha = plan.alpha;
        cfg.master_seed = derive_seed(trial_seed, stat_stream++);
        cfg.threads = 1;
        cfg.keep_profiles = false;
        std::vector<std::int64_t> detected;
        if (stat == "ceofop") {
            detected = detect_multiple(x, plan.order, cfg).change_points;
        } else if (stat == "bdcorr") {
            detected = bd_corr_detect_multiple(x, plan.order, plan.bd_delta, cfg);
        }
        result.detected.emplace_back(stat, std::move(detected));
    }
    return result;
}

std::string join_int64(const std::vector<std::int64_t>& values) {
    std::string out;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (k > 0) {
            out += ';';
        }
        out += std::to_string(values[k]);
    }
    return out;
}

std::vector<std::int64_t> split_int64(const std::string& text) {
    std::vector<std::int64_t> out;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find(';', start);
        if (end == std::string::npos) {
            end = text.size();
        }
        out.push_back(std::stoll(text.substr(start, end - start)));
        start = end + 1;
    }
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

json plan_to_json(const BenchmarkPlan& plan) {
    json process;
    process["kind"] = plan.kind == ProcessKind::AR ? "AR" : "NL";
    if (plan.kind == ProcessKind::AR) {
        process["phi"] = plan.phi;
    } else {
        process["r"] = plan.r;
        process["sigma"] = plan.sigma;
    }
    process["length"] = plan.length;
    process["change_centers"] = plan.change_centers;

    json j;
    j["name"] = plan.name;
    j["mode"] = plan.mode == BenchMode::Single ? "single" : "multi";
    j["order"] = plan.order;
    j["trials"] = plan.resolved_trials();
    j["window"] = plan.window;
    j["max_err"] = plan.max_err;
    j["alpha"] = plan.alpha;
    j["bd_delta"] = plan.bd_delta;
    j["statistics"] = plan.statistics;
    j["process"] = process;
    return j;
}

}  // namespace

std::int64_t BenchmarkPlan::resolved_trials() const {
    if (trials > 0) {
        return trials;
    }
    return mode == BenchMode::Single ? 1000 : 500;
}

void BenchmarkPlan::validate() const {
    if (order < 1 || order > kMaxPairOrder) {
        throw std::invalid_argument("plan: unsupported order");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("plan: alpha must lie in (0, 1)");
    }
    if (window < 0 || max_err < 0) {
        throw std::invalid_argument("plan: window and max_err must be nonnegative");
    }
    if (statistics.empty()) {
        throw std::invalid_argument("plan: no statistics selected");
    }
    const auto& allowed = mode == BenchMode::Single ? kSingleStats : kMultiStats;
    for (const auto& s : statistics) {
        if (!known_stat(s, allowed)) {
            throw std::invalid_argument("plan: unknown statistic '" + s + "' for this mode");
        }
    }
    if (change_centers.empty()) {
        throw std::invalid_argument("plan: at least one change center required");
    }
    if (mode == BenchMode::Single && change_centers.size() != 1) {
        throw std::invalid_argument("plan: single mode takes exactly one change center");
    }
    if (length < 2 * default_t_min(order) + order) {
        throw std::invalid_argument("plan: series too short for the order's minimal margins");
    }
    // Also checks parameter counts and ranges.
    spec_with_change_points(*this, change_centers).validate();
    std::int64_t prev_hi = 0;
    for (std::int64_t c : change_centers) {
        if (c - window <= prev_hi || c + window >= length) {
            throw std::invalid_argument("plan: change window outside the series or overlapping");
        }
        prev_hi = c + window;
    }
}

BenchmarkPlan BenchmarkPlan::preset(const std::string& name, std::int64_t window) {
    if (window < 1) {
        throw std::invalid_argument("preset: window must be positive");
    }
    BenchmarkPlan plan;
    plan.name = name;
    plan.window = window;
    plan.max_err = window;
    const std::int64_t w = window;

    const auto single = [&](ProcessKind kind, std::vector<double> a, std::vector<double> b) {
        plan.mode = BenchMode::Single;
        plan.kind = kind;
        plan.length = 80 * w;
        plan.change_centers = {20 * w};
        plan.statistics = kSingleStats;
        if (kind == ProcessKind::AR) {
            plan.phi = std::move(a);
        } else {
            plan.r = std::move(a);
            plan.sigma = std::move(b);
        }
    };
    const auto multi = [&](ProcessKind kind, std::vector<double> a, std::vector<double> b) {
        plan.mode = BenchMode::Multi;
        plan.kind = kind;
        plan.length = 100 * w;
        plan.change_centers = {30 * w, 70 * w, 90 * w};
        plan.statistics = kMultiStats;
        if (kind == ProcessKind::AR) {
            plan.phi = std::move(a);
        } else {
            plan.r = std::move(a);
            plan.sigma = std::move(b);
        }
    };

    if (name == "nl-3.95-3.98") {
        single(ProcessKind::NL, {3.95, 3.98}, {0.2, 0.2});
    } else if (name == "nl-3.95-3.80") {
        single(ProcessKind::NL, {3.95, 3.80}, {0.3, 0.3});
    } else if (name == "nl-3.95-4.00") {
        single(ProcessKind::NL, {3.95, 4.00}, {0.2, 0.2});
    } else if (name == "ar-0.1-0.3") {
        single(ProcessKind::AR, {0.1, 0.3}, {});
    } else if (name == "ar-0.1-0.4") {
        single(ProcessKind::AR, {0.1, 0.4}, {});
    } else if (name == "ar-0.1-0.5") {
        single(ProcessKind::AR, {0.1, 0.5}, {});
    } else if (name == "ar-4seg") {
        multi(ProcessKind::AR, {0.3, 0.5, 0.1, 0.4}, {});
    } else if (name == "nl-4seg") {
        multi(ProcessKind::NL, {3.98, 4.0, 3.95, 3.8}, {0.2, 0.2, 0.2, 0.3});
    } else {
        throw std::invalid_argument("unknown benchmark preset: " + name);
    }
    plan.validate();
    return plan;
}

BenchmarkPlan BenchmarkPlan::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& err) {
        throw std::invalid_argument(std::string("plan: invalid JSON: ") + err.what());
    }
    static const std::vector<std::string> known_keys{
        "schema", "preset", "name",       "mode",    "order",   "trials", "window",
        "max_err", "alpha",  "bd_delta",  "statistics", "process"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find(known_keys.begin(), known_keys.end(), key) == known_keys.end()) {
            throw std::invalid_argument("plan: unknown key '" + key + "'");
        }
    }

    BenchmarkPlan plan;
    if (j.contains("window")) {
        plan.window = j.at("window").get<std::int64_t>();
    }
    if (j.contains("preset")) {
        plan = preset(j.at("preset").get<std::string>(), plan.window);
    }
    if (j.contains("name")) {
        plan.name = j.at("name").get<std::string>();
    }
    if (j.contains("mode")) {
        const auto mode = j.at("mode").get<std::string>();
        if (mode == "single") {
            plan.mode = BenchMode::Single;
        } else if (mode == "multi") {
            plan.mode = BenchMode::Multi;
        } else {
            throw std::invalid_argument("plan: mode must be 'single' or 'multi'");
        }
    }
    if (j.contains("order")) {
        plan.order = j.at("order").get<int>();
    }
    if (j.contains("trials")) {
        plan.trials = j.at("trials").get<std::int64_t>();
    }
    if (j.contains("max_err")) {
        plan.max_err = j.at("max_err").get<std::int64_t>();
    }
    if (j.contains("alpha")) {
        plan.alpha = j.at("alpha").get<double>();
    }
    if (j.contains("bd_delta")) {
        plan.bd_delta = j.at("bd_delta").get<double>();
    }
    if (j.contains("statistics")) {
        plan.statistics = j.at("statistics").get<std::vector<std::string>>();
    }
    if (j.contains("process")) {
        const json& p = j.at("process");
        const auto kind = p.at("kind").get<std::string>();
        if (kind == "AR") {
            plan.kind = ProcessKind::AR;
            plan.phi = p.at("phi").get<std::vector<double>>();
            plan.r.clear();
            plan.sigma.clear();
        } else if (kind == "NL") {
            plan.kind = ProcessKind::NL;
            plan.r = p.at("r").get<std::vector<double>>();
            plan.sigma = p.at("sigma").get<std::vector<double>>();
            plan.phi.clear();
        } else {
            throw std::invalid_argument("plan: process.kind must be 'AR' or 'NL'");
        }
        plan.length = p.at("length").get<std::int64_t>();
        plan.change_centers = p.at("change_centers").get<std::vector<std::int64_t>>();
    }
    if (plan.statistics.empty()) {
        plan.statistics = plan.mode == BenchMode::Single ? kSingleStats : kMultiStats;
    }
    plan.validate();
    return plan;
}

SingleChangeMetrics single_change_metrics(std::span<const SingleTrialResult> results,
                                          const std::string& statistic, std::int64_t max_err) {
    if (results.empty()) {
        throw std::invalid_argument("single_change_metrics: no trials");
    }
    SingleChangeMetrics m;
    double sum = 0.0;
    double sum_sq = 0.0;
    std::int64_t hits = 0;
    for (const auto& trial : results) {
        const auto it = std::find_if(trial.estimates.begin(), trial.estimates.end(),
                                     [&](const auto& kv) { return kv.first == statistic; });
        if (it == trial.estimates.end()) {
            throw std::invalid_argument("single_change_metrics: statistic not in results: " +
                                        statistic);
        }
        const auto err = static_cast<double>(it->second - trial.t_true);
        if (std::abs(err) <= static_cast<double>(max_err)) {
            ++hits;
        }
        sum += err;
        sum_sq += err * err;
    }
    const auto n = static_cast<double>(results.size());
    m.n = static_cast<std::int64_t>(results.size());
    m.se = static_cast<double>(hits) / n;
    m.bias = sum / n;
    m.rmse = std::sqrt(sum_sq / n);
    return m;
}

MultiChangeMetrics multi_change_metrics(std::span<const MultiTrialResult> results,
                                        const std::string& statistic, std::int64_t max_err,
                                        std::size_t n_changes) {
    if (results.empty()) {
        throw std::invalid_argument("multi_change_metrics: no trials");
    }
    MultiChangeMetrics m;
    m.se_k.assign(n_changes, 0.0);
    double surplus = 0.0;
    for (const auto& trial : results) {
        if (trial.t_true.size() != n_changes) {
            throw std::invalid_argument("multi_change_metrics: trial change count mismatch");
        }
        const auto it = std::find_if(trial.detected.begin(), trial.detected.end(),
                                     [&](const auto& kv) { return kv.first == statistic; });
        if (it == trial.detected.end()) {
            throw std::invalid_argument("multi_change_metrics: statistic not in results: " +
                                        statistic);
        }
        const auto& detected = it->second;
        std::size_t matched = 0;
        for (std::size_t k = 0; k < n_changes; ++k) {
            std::int64_t best = std::numeric_limits<std::int64_t>::max();
            for (const std::int64_t est : detected) {
                best = std::min(best, std::abs(est - trial.t_true[k]));
            }
            if (best <= max_err) {
                m.se_k[k] += 1.0;
                ++matched;
            }
        }
        surplus += static_cast<double>(detected.size()) - static_cast<double>(matched);
    }
    const auto n = static_cast<double>(results.size());
    m.n = static_cast<std::int64_t>(results.size());
    for (double& v : m.se_k) {
        v /= n;
    }
    m.se_avg = 0.0;
    for (double v : m.se_k) {
        m.se_avg += v;
    }
    m.se_avg /= static_cast<double>(n_changes);
    m.fcp = surplus / n;
    return m;
}

BenchmarkResult run_benchmark(const BenchmarkPlan& plan, std::int64_t n_trials,
                              std::uint64_t master_seed, int threads) {
    plan.validate();
    BenchmarkResult result;
    result.plan = plan;
    result.plan.trials = n_trials > 0 ? n_trials : plan.resolved_trials();
    result.master_seed = master_seed;

    const std::int64_t n = result.plan.trials;
    if (plan.mode == BenchMode::Single) {
        result.single_trials.resize(static_cast<std::size_t>(n));
        parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
            result.single_trials[i] =
                run_single_trial(result.plan, static_cast<std::int64_t>(i), master_seed);
        });
    } else {
        result.multi_trials.resize(static_cast<std::size_t>(n));
        parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
            result.multi_trials[i] =
                run_multi_trial(result.plan, static_cast<std::int64_t>(i), master_seed);
        });
    }
    return result;
}

std::string trials_to_csv(const BenchmarkResult& result) {
    std::ostringstream out;
    if (result.plan.mode == BenchMode::Single) {
        out << "# schema=ceop.bench-trials-single.v1\n";
        out << "trial,seed,t_true,statistic,t_hat,err\n";
        for (const auto& trial : result.single_trials) {
            for (const auto& [stat, estimate] : trial.estimates) {
                out << trial.trial << ',' << trial.seed << ',' << trial.t_true << ',' << stat
                    << ',' << estimate << ',' << (estimate - trial.t_true) << '\n';
            }
        }
    } else {
        out << "# schema=ceop.bench-trials-multi.v1\n";
        out << "trial,seed,true_cps,statistic,n_detected,detected_cps\n";
        for (const auto& trial : result.multi_trials) {
            for (const auto& [stat, detected] : trial.detected) {
                out << trial.trial << ',' << trial.seed << ',' << join_int64(trial.t_true) << ','
                    << stat << ',' << detected.size() << ',' << join_int64(detected) << '\n';
            }
        }
    }
    return out.str();
}

BenchmarkResult trials_from_csv(const std::string& csv_text, const BenchmarkPlan& plan,
                                std::uint64_t master_seed) {
    BenchmarkResult result;
    result.plan = plan;
    result.master_seed = master_seed;

    std::istringstream in(csv_text);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!header_seen) {
            header_seen = true;  // column header
            continue;
        }
        const auto fields = split_csv_line(line);
        if (plan.mode == BenchMode::Single) {
            if (fields.size() != 6) {
                throw std::invalid_argument("trial CSV: malformed row: " + line);
            }
            const auto trial_no = std::stoll(fields[0]);
            if (result.single_trials.empty() || result.single_trials.back().trial != trial_no) {
                SingleTrialResult t;
                t.trial = trial_no;
                t.seed = std::stoull(fields[1]);
                t.t_true = std::stoll(fields[2]);
                result.single_trials.push_back(std::move(t));
            }
            result.single_trials.back().estimates.emplace_back(fields[3], std::stoll(fields[4]));
        } else {
            if (fields.size() != 6) {
                throw std::invalid_argument("trial CSV: malformed row: " + line);
            }
            const auto trial_no = std::stoll(fields[0]);
            if (result.multi_trials.empty() || result.multi_trials.back().trial != trial_no) {
                MultiTrialResult t;
                t.trial = trial_no;
                t.seed = std::stoull(fields[1]);
                t.t_true = split_int64(fields[2]);
                result.multi_trials.push_back(std::move(t));
            }
            result.multi_trials.back().detected.emplace_back(fields[3], split_int64(fields[5]));
        }
    }
    return result;
}

std::string summary_to_json(const BenchmarkResult& result) {
    json metrics;
    if (result.plan.mode == BenchMode::Single) {
        for (const auto& stat : result.plan.statistics) {
            const SingleChangeMetrics m =
                single_change_metrics(result.single_trials, stat, result.plan.max_err);
            metrics[stat] = {{"se", m.se}, {"bias", m.bias}, {"rmse", m.rmse}};
        }
    } else {
        for (const auto& stat : result.plan.statistics) {
            const MultiChangeMetrics m = multi_change_metrics(
                result.multi_trials, stat, result.plan.max_err, result.plan.change_centers.size());
            metrics[stat] = {{"se_k", m.se_k}, {"se_avg", m.se_avg}, {"fcp", m.fcp}};
        }
    }

    json j;
    j["schema"] = "ceop.bench-summary.v1";
    j["plan"] = plan_to_json(result.plan);
    j["master_seed"] = result.master_seed;
    j["n_trials"] = result.plan.trials;
    j["noise_method"] = kNoiseMethod;
    j["metrics"] = metrics;
    return j.dump(2) + "\n";
}

}  // namespace ceop
