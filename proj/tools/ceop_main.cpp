#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ceop/asymptotics.hpp"
#include "ceop/bench.hpp"
#include "ceop/detection.hpp"
#include "ceop/io.hpp"
#include "ceop/parallel.hpp"
#include "ceop/processes.hpp"
#include "ceop/statistics.hpp"

namespace {

using nlohmann::json;
using namespace ceop;

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

std::uint64_t resolve_seed(std::optional<std::uint64_t> seed) {
    if (seed) {
        return *seed;
    }
    std::random_device rd;
    const std::uint64_t generated =
        (static_cast<std::uint64_t>(rd()) << 32) ^ static_cast<std::uint64_t>(rd());
    std::cerr << "generated seed: " << generated << "\n";
    return generated;
}

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << content;
    } else {
        write_text_file(out_path, content);
    }
}

// Process description shared by simulate and delta:
//   {"kind": "AR"|"NL", "phi"|["r","sigma"]: [...], "length": N,
//    "change_points": [...]}  or  {"change_centers": [...], "window": W}
struct ProcessConfig {
    ProcessSpec spec;  // change_points empty when centers are used
    std::vector<std::int64_t> change_centers;
    std::int64_t window = 0;
    bool randomized = false;
};

ProcessConfig parse_process_config(const json& j) {
    ProcessConfig config;
    const auto kind = j.at("kind").get<std::string>();
    std::vector<std::int64_t> points;
    if (j.contains("change_points") && j.contains("change_centers")) {
        throw std::invalid_argument(
            "process config: give either change_points or change_centers, not both");
    }
    if (j.contains("change_points")) {
        points = j.at("change_points").get<std::vector<std::int64_t>>();
    }
    if (j.contains("change_centers")) {
        config.change_centers = j.at("change_centers").get<std::vector<std::int64_t>>();
        config.window = j.value("window", std::int64_t{0});
        config.randomized = true;
    }
    const auto length = j.at("length").get<std::int64_t>();
    if (kind == "AR") {
        config.spec = ProcessSpec::ar(j.at("phi").get<std::vector<double>>(),
                                      config.randomized ? config.change_centers : points,
                                      length);
    } else if (kind == "NL") {
        config.spec = ProcessSpec::nl(j.at("r").get<std::vector<double>>(),
                                      j.at("sigma").get<std::vector<double>>(),
                                      config.randomized ? config.change_centers : points,
                                      length);
    } else {
        throw std::invalid_argument("process config: kind must be 'AR' or 'NL'");
    }
    if (config.randomized) {
        config.spec.change_points.clear();
    }
    return config;
}

json process_to_json(const ProcessSpec& spec) {
    json j;
    j["kind"] = spec.kind == ProcessKind::AR ? "AR" : "NL";
    if (spec.kind == ProcessKind::AR) {
        j["phi"] = spec.phi;
    } else {
        j["r"] = spec.r;
        j["sigma"] = spec.sigma;
    }
    j["length"] = spec.length;
    j["change_points"] = spec.change_points;
    return j;
}

std::vector<double> load_series(const std::string& path, int csv_column) {
    return read_series_file(path, csv_column);
}

int cmd_detect(const std::string& input, int csv_column, int order, double alpha,
               std::optional<std::uint64_t> seed_opt, bool multi, std::int64_t t_min,
               std::size_t n_boot, int threads, const std::string& out_path) {
    const std::vector<double> x = load_series(input, csv_column);
    const auto needed = min_series_values(order);
    if (static_cast<std::int64_t>(x.size()) < needed) {
        throw std::invalid_argument(
            "series too short for order " + std::to_string(order) + ": need at least 2*(d+1)!(d+1)+1 = " +
            std::to_string(needed) + " values, got " + std::to_string(x.size()));
    }

    DetectionConfig config;
    config.alpha = alpha;
    config.t_min = t_min;
    if (n_boot > 0) {
        config.n_boot = n_boot;
    }
    config.master_seed = resolve_seed(seed_opt);
    config.threads = threads;
    config.keep_profiles = false;

    const DetectionReport report = multi ? detect_multiple(x, order, config)
                                         : detect_single_report(x, order, config);

    json decisions = json::array();
    for (const auto& dec : report.decisions) {
        json d;
        d["segment"] = {dec.seg_start, dec.seg_end};
        d["phase"] = dec.phase;
        d["too_short"] = dec.too_short;
        if (!dec.too_short) {
            d["candidate"] = dec.candidate;
            d["max_stat"] = dec.stat_value;
            d["threshold"] = dec.threshold;
            d["n_boot"] = dec.n_boot;
            d["detected"] = dec.detected;
        }
        decisions.push_back(std::move(d));
    }

    json j;
    j["schema"] = "ceop.detect.v1";
    j["statistic"] = "ceofop";
    j["order"] = order;
    j["alpha"] = alpha;
    j["multi"] = multi;
    j["seed"] = config.master_seed;
    j["series_length"] = x.size();
    j["t_min"] = config.t_min > 0 ? config.t_min : default_t_min(order);
    j["change_points"] = report.change_points;
    j["n_segments"] = report.n_segments;
    j["decisions"] = decisions;
    emit(j.dump(2) + "\n", out_path);
    return 0;
}

int cmd_profile(const std::string& input, int csv_column, int order, const std::string& stat,
                double delta, std::int64_t t_min, const std::string& out_path) {
    const std::vector<double> x = load_series(input, csv_column);
    StatProfile profile;
    if (stat == "ceofop") {
        profile = ceofop_profile(extract_sequence(x, order), t_min);
    } else if (stat == "bdexp") {
        profile = bd_exp_profile(x, delta, t_min,
                                 static_cast<std::int64_t>(x.size()) - t_min);
    } else if (stat == "bdcorr") {
        profile = bd_corr_profile(x, delta, t_min,
                                  static_cast<std::int64_t>(x.size()) - 1 - t_min);
    } else {
        throw std::invalid_argument("unknown statistic: " + stat);
    }
    std::string out = "# schema=ceop.profile.v1\nt,value\n";
    for (std::size_t k = 0; k < profile.t_values.size(); ++k) {
        out += std::to_string(profile.t_values[k]);
        out += ',';
        out += format_double(profile.s_values[k]);
        out += '\n';
    }
    emit(out, out_path);
    return 0;
}

int cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed_opt,
                 const std::string& out_path) {
    json j;
    try {
        j = json::parse(read_text_file(config_path));
    } catch (const json::parse_error& err) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + err.what());
    }
    ProcessConfig config = parse_process_config(j);
    const std::uint64_t seed = resolve_seed(seed_opt);

    ProcessSpec spec = config.spec;
    if (config.randomized) {
        Rng placement(derive_seed(seed, 1));
        spec.change_points = random_change_points(config.change_centers, config.window,
                                                  spec.length, placement);
        spec.validate();
    }
    const std::vector<double> x = spec.kind == ProcessKind::AR
                                      ? gen_ar(spec, derive_seed(seed, 2))
                                      : gen_nl(spec, derive_seed(seed, 2));
    std::string series;
    series.reserve(x.size() * 20);
    for (double v : x) {
        series += format_double(v);
        series += '\n';
    }
    emit(series, out_path);

    json meta;
    meta["schema"] = "ceop.simulate.v1";
    meta["seed"] = seed;
    meta["noise_method"] = kNoiseMethod;
    meta["process"] = process_to_json(spec);
    meta["values"] = x.size();
    if (!out_path.empty()) {
        meta["out"] = out_path;
        std::cout << meta.dump(2) << "\n";
    } else {
        std::cerr << meta.dump(2) << "\n";
    }
    return 0;
}

int cmd_bench(const std::string& plan_path, std::int64_t trials,
              std::optional<std::uint64_t> seed_opt, const std::string& out_dir, int threads) {
    const BenchmarkPlan plan = BenchmarkPlan::from_json_text(read_text_file(plan_path));
    const std::uint64_t seed = resolve_seed(seed_opt);
    const BenchmarkResult result = run_benchmark(plan, trials, seed, threads);
    const std::string summary = summary_to_json(result);
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_text_file(out_dir + "/trials.csv", trials_to_csv(result));
        write_text_file(out_dir + "/summary.json", summary);
    }
    std::cout << summary;
    return 0;
}

int cmd_delta(const std::string& p_path, const std::string& q_path, int order,
              std::vector<double> gammas, int theta_grid, std::int64_t mc_length,
              std::optional<std::uint64_t> seed_opt, const std::string& out_path) {
    const auto load_dist = [&](const std::string& path, std::uint64_t stream,
                               std::uint64_t seed) {
        json j;
        try {
            j = json::parse(read_text_file(path));
        } catch (const json::parse_error& err) {
            throw std::invalid_argument(path + ": invalid JSON: " + err.what());
        }
        const ProcessConfig config = parse_process_config(j);
        if (config.randomized || !config.spec.change_points.empty()) {
            throw std::invalid_argument(path + ": delta sources must be single-segment specs");
        }
        return mc_pair_distribution(config.spec, mc_length, derive_seed(seed, stream), order);
    };
    const std::uint64_t seed = resolve_seed(seed_opt);
    const PairDistribution P = load_dist(p_path, 1, seed);
    const PairDistribution Q = load_dist(q_path, 2, seed);

    if (gammas.empty()) {
        gammas.push_back(0.5);
    }
    std::string out = "# schema=ceop.delta-grid.v1\ngamma,theta,delta\n";
    for (const double gamma : gammas) {
        for (int k = 1; k <= theta_grid; ++k) {
            const double theta =
                static_cast<double>(k) / static_cast<double>(theta_grid + 1);
            const double value = delta({order, gamma, theta, P, Q});
            out += format_double(gamma);
            out += ',';
            out += format_double(theta);
            out += ',';
            out += format_double(value);
            out += '\n';
        }
    }
    emit(out, out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ordinal-pattern change-point detection toolkit"};
    app.require_subcommand(1);

    const int env_threads = default_thread_count();

    // detect
    std::string in_path;
    int csv_column = -1;
    int order = 3;
    double alpha = 0.05;
    std::optional<std::uint64_t> seed;
    bool multi = false;
    std::int64_t t_min = 0;
    std::size_t n_boot = 0;
    int threads = env_threads;
    std::string out_path;

    auto* detect = app.add_subcommand("detect", "Detect change-points in a series file");
    detect->add_option("input", in_path, "series file, one value per line")->required();
    detect->add_option("--csv-column", csv_column, "read this 0-based CSV column instead");
    detect->add_option("-d,--order", order, "pattern order")->check(CLI::Range(1, 5));
    detect->add_option("-a,--alpha", alpha, "nominal false-alarm probability");
    detect->add_option("-s,--seed", seed, "master seed (generated and printed if omitted)");
    detect->add_flag("-m,--multi", multi, "detect any number of change-points");
    detect->add_option("--t-min", t_min, "minimal segment margin (default (d+1)!(d+1))");
    detect->add_option("--n-boot", n_boot, "override the bootstrap sample count");
    detect->add_option("-t,--threads", threads, "worker threads");
    detect->add_option("-o,--out", out_path, "write the JSON report here instead of stdout");

    // profile
    std::string p_in, p_stat = "ceofop", p_out;
    int p_csv_column = -1;
    int p_order = 3;
    double p_delta = 0.5;
    std::int64_t p_t_min = 1;
    auto* profile = app.add_subcommand("profile", "Emit a statistic profile as CSV");
    profile->add_option("input", p_in, "series file")->required();
    profile->add_option("--csv-column", p_csv_column, "read this 0-based CSV column instead");
    profile->add_option("-d,--order", p_order, "pattern order")->check(CLI::Range(1, 5));
    profile->add_option("--stat", p_stat, "ceofop, bdexp or bdcorr")
        ->check(CLI::IsMember({"ceofop", "bdexp", "bdcorr"}));
    profile->add_option("--delta", p_delta, "edge weighting for the bd statistics");
    profile->add_option("--t-min", p_t_min, "margin from the range ends");
    profile->add_option("-o,--out", p_out, "write CSV here instead of stdout");

    // simulate
    std::string s_config, s_out;
    std::optional<std::uint64_t> s_seed;
    auto* simulate = app.add_subcommand("simulate", "Generate a process realization");
    simulate->add_option("-c,--config", s_config, "process spec JSON")->required();
    simulate->add_option("-s,--seed", s_seed, "master seed (generated and printed if omitted)");
    simulate->add_option("-o,--out", s_out, "series output file (stdout if omitted)");

    // bench
    std::string b_plan, b_out_dir;
    std::int64_t b_trials = 0;
    std::optional<std::uint64_t> b_seed;
    int b_threads = env_threads;
    auto* bench = app.add_subcommand("bench", "Run a benchmark plan");
    bench->add_option("-p,--plan", b_plan, "benchmark plan JSON")->required();
    bench->add_option("-n,--trials", b_trials, "trial count (0 = plan default)");
    bench->add_option("-s,--seed", b_seed, "master seed (generated and printed if omitted)");
    bench->add_option("-o,--out-dir", b_out_dir, "directory for trials.csv and summary.json");
    bench->add_option("-t,--threads", b_threads, "worker threads");

    // delta
    std::string d_p, d_q, d_out;
    int d_order = 2;
    std::vector<double> d_gammas;
    int d_theta_grid = 99;
    std::int64_t d_mc_length = 1000000;
    std::optional<std::uint64_t> d_seed;
    auto* delta_cmd =
        app.add_subcommand("delta", "Asymptotic statistic grid for two glued processes");
    delta_cmd->add_option("--p-spec", d_p, "single-segment process spec JSON")->required();
    delta_cmd->add_option("--q-spec", d_q, "single-segment process spec JSON")->required();
    delta_cmd->add_option("-d,--order", d_order, "pattern order")->check(CLI::Range(1, 5));
    delta_cmd->add_option("-g,--gamma", d_gammas, "glue fractions (default 0.5)");
    delta_cmd->add_option("--theta-grid", d_theta_grid, "interior grid points")
        ->check(CLI::PositiveNumber);
    delta_cmd->add_option("--mc-length", d_mc_length, "Monte-Carlo realization length");
    delta_cmd->add_option("-s,--seed", d_seed, "master seed (generated and printed if omitted)");
    delta_cmd->add_option("-o,--out", d_out, "write CSV here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (detect->parsed()) {
            return cmd_detect(in_path, csv_column, order, alpha, seed, multi, t_min, n_boot,
                              threads, out_path);
        }
        if (profile->parsed()) {
            return cmd_profile(p_in, p_csv_column, p_order, p_stat, p_delta, p_t_min, p_out);
        }
        if (simulate->parsed()) {
            return cmd_simulate(s_config, s_seed, s_out);
        }
        if (bench->parsed()) {
            return cmd_bench(b_plan, b_trials, b_seed, b_out_dir, b_threads);
        }
        if (delta_cmd->parsed()) {
            return cmd_delta(d_p, d_q, d_order, d_gammas, d_theta_grid, d_mc_length, d_seed,
                             d_out);
        }
    } catch (const std::invalid_argument& err) {
        std::cerr << "validation error: " << err.what() << "\n";
        return kExitValidation;
    } catch (const std::runtime_error& err) {
        std::cerr << "i/o error: " << err.what() << "\n";
        return kExitIo;
    }
    return 0;
}
