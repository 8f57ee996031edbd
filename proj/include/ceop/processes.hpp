#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ceop/rng.hpp"

namespace ceop {

enum class ProcessKind { AR, NL };

/**
 * @brief A piecewise-stationary process description.
 *
 * The series runs over t = 0, ..., length; change_points are strictly
 * increasing interior times. Segment k (0-based) covers times
 * (t*_k-1, t*_k] with sentinels t*_-1 = 0 and t*_n = length, so x(t*) is the
 * last value produced under the old parameters.
 *
 * AR segments: x(t) = phi_k x(t-1) + eps(t), phi_k in [0, 1), x(0) = eps(0).
 * NL segments: latent z(t) = r_k z(t-1) (1 - z(t-1)) with r_k in [3.57, 4],
 * observed x(t) = z(t) + sigma_k eps(t), sigma_k > 0. The latent state starts
 * uniform on [0, 1] and is carried across change-points; only (r, sigma)
 * switch.
 */
struct ProcessSpec {
    ProcessKind kind = ProcessKind::AR;
    std::vector<double> phi;             // AR, one per segment
    std::vector<double> r;               // NL, one per segment
    std::vector<double> sigma;           // NL, one per segment
    std::vector<std::int64_t> change_points;
    std::int64_t length = 0;

    int n_segments() const {
        return static_cast<int>(change_points.size()) + 1;
    }
    /// Index of the segment that generates x(t).
    int segment_of(std::int64_t t) const;
    /// Throws std::invalid_argument when parameters or change-points are
    /// out of range.
    void validate() const;

    static ProcessSpec ar(std::vector<double> phi, std::vector<std::int64_t> change_points,
                          std::int64_t length);
    static ProcessSpec nl(std::vector<double> r, std::vector<double> sigma,
                          std::vector<std::int64_t> change_points, std::int64_t length);
};

/// Name of the deviate method used by the generators, kept in output
/// metadata so that archived runs stay attributable.
inline constexpr const char* kNoiseMethod = Rng::kMethodName;

/// Generates an AR realization x(0..L); same spec and seed give identical
/// output.
std::vector<double> gen_ar(const ProcessSpec& spec, std::uint64_t seed);

/// Generates a noisy-logistic realization x(0..L).
std::vector<double> gen_nl(const ProcessSpec& spec, std::uint64_t seed);

/// AR recursion with a caller-supplied innovation source (test hook).
std::vector<double> gen_ar_with(const ProcessSpec& spec, const std::function<double()>& noise);

/// NL recursion with explicit latent start and innovation source (test hook).
std::vector<double> gen_nl_with(const ProcessSpec& spec, double latent_init,
                                const std::function<double()>& noise);

/// Draws one change-point per center, independently uniform on
/// {center - half_width, ..., center + half_width}. Windows must lie inside
/// (0, length) and must not overlap.
std::vector<std::int64_t> random_change_points(std::span<const std::int64_t> centers,
                                               std::int64_t half_width, std::int64_t length,
                                               Rng& rng);

}  // namespace ceop
