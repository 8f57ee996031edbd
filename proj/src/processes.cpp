#include "ceop/processes.hpp"

#include <algorithm>
#include <stdexcept>

namespace ceop {

namespace {

void require(bool cond, const char* message) {
    if (!cond) {
        throw std::invalid_argument(message);
    }
}

}  // namespace

int ProcessSpec::segment_of(std::int64_t t) const {
    const auto it = std::lower_bound(change_points.begin(), change_points.end(), t);
    return static_cast<int>(it - change_points.begin());
}

void ProcessSpec::validate() const {
    require(length >= 1, "process spec: length must be positive");
    const auto n_seg = static_cast<std::size_t>(n_segments());
    std::int64_t prev = 0;
    for (std::int64_t cp : change_points) {
        require(cp > prev, "process spec: change-points must be strictly increasing and > 0");
        prev = cp;
    }
    require(change_points.empty() || change_points.back() < length,
            "process spec: change-points must lie inside (0, length)");
    if (kind == ProcessKind::AR) {
        require(phi.size() == n_seg, "process spec: need one phi per segment");
        for (double p : phi) {
            require(p >= 0.0 && p < 1.0, "process spec: phi must lie in [0, 1)");
        }
    } else {
        require(r.size() == n_seg, "process spec: need one r per segment");
        require(sigma.size() == n_seg, "process spec: need one sigma per segment");
        for (double v : r) {
            require(v >= 3.57 && v <= 4.0, "process spec: r must lie in [3.57, 4]");
        }
        for (double s : sigma) {
            require(s > 0.0, "process spec: sigma must be positive");
        }
    }
}

ProcessSpec ProcessSpec::ar(std::vector<double> phi, std::vector<std::int64_t> change_points,
                            std::int64_t length) {
    ProcessSpec spec;
    spec.kind = ProcessKind::AR;
    spec.phi = std::move(phi);
    spec.change_points = std::move(change_points);
    spec.length = length;
    spec.validate();
    return spec;
}

ProcessSpec ProcessSpec::nl(std::vector<double> r, std::vector<double> sigma,
                            std::vector<std::int64_t> change_points, std::int64_t length) {
    ProcessSpec spec;
    spec.kind = ProcessKind::NL;
    spec.r = std::move(r);
    spec.sigma = std::move(sigma);
    spec.change_points = std::move(change_points);
    spec.length = length;
    spec.validate();
    return spec;
}

std::vector<double> gen_ar_with(const ProcessSpec& spec, const std::function<double()>& noise) {
    spec.validate();
    require(spec.kind == ProcessKind::AR, "gen_ar: spec is not AR");
    std::vector<double> x(static_cast<std::size_t>(spec.length) + 1);
    x[0] = noise();
    for (std::int64_t t = 1; t <= spec.length; ++t) {
        const double phi = spec.phi[static_cast<std::size_t>(spec.segment_of(t))];
        x[static_cast<std::size_t>(t)] = phi * x[static_cast<std::size_t>(t - 1)] + noise();
    }
    return x;
}

std::vector<double> gen_nl_with(const ProcessSpec& spec, double latent_init,
                                const std::function<double()>& noise) {
    spec.validate();
    require(spec.kind == ProcessKind::NL, "gen_nl: spec is not NL");
    require(latent_init >= 0.0 && latent_init <= 1.0, "gen_nl: latent start outside [0, 1]");
    std::vector<double> x(static_cast<std::size_t>(spec.length) + 1);
    double z = latent_init;
    x[0] = z + spec.sigma[0] * noise();
    for (std::int64_t t = 1; t <= spec.length; ++t) {
        const auto k = static_cast<std::size_t>(spec.segment_of(t));
        z = spec.r[k] * z * (1.0 - z);
        x[static_cast<std::size_t>(t)] = z + spec.sigma[k] * noise();
    }
    return x;
}

std::vector<double> gen_ar(const ProcessSpec& spec, std::uint64_t seed) {
    Rng rng(seed);
    return gen_ar_with(spec, [&rng]() { return rng.gaussian(); });
}

std::vector<double> gen_nl(const ProcessSpec& spec, std::uint64_t seed) {
    Rng rng(seed);
    const double init = rng.uniform01();
    return gen_nl_with(spec, init, [&rng]() { return rng.gaussian(); });
}

std::vector<std::int64_t> random_change_points(std::span<const std::int64_t> centers,
                                               std::int64_t half_width, std::int64_t length,
                                               Rng& rng) {
    require(half_width >= 0, "random_change_points: negative half-width");
    std::int64_t prev_hi = 0;
    for (std::int64_t c : centers) {
        const std::int64_t lo = c - half_width;
        const std::int64_t hi = c + half_width;
        require(lo > 0 && hi < length, "random_change_points: window outside (0, length)");
        require(lo > prev_hi, "random_change_points: windows overlap");
        prev_hi = hi;
    }
    std::vector<std::int64_t> points;
    points.reserve(centers.size());
    for (std::int64_t c : centers) {
        points.push_back(rng.uniform_int(c - half_width, c + half_width));
    }
    return points;
}

}  // namespace ceop
