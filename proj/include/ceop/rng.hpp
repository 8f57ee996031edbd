#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace ceop {

/// Stateless 64-bit mixing function (splitmix64 finalizer).
std::uint64_t mix64(std::uint64_t x);

/// Derives an independent substream seed from a master seed and a stream index.
///
/// Used to give every bootstrap replicate / benchmark trial its own seed so
/// that results do not depend on scheduling order or thread count.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/**
 * @brief Seeded random source with explicit, platform-independent transforms.
 *
 * std::normal_distribution and std::shuffle leave their algorithms
 * implementation-defined, which breaks byte-identical reproducibility across
 * standard libraries. This wrapper fixes the transforms: 53-bit uniform
 * doubles from the raw engine output and Box-Muller gaussians.
 */
class Rng {
public:
    /// Name of the deviate method, recorded in generator metadata.
    static constexpr const char* kMethodName = "mt19937_64/box-muller";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal deviate (Box-Muller, spare cached).
    double gaussian();

    /// Uniform integer in [lo, hi], both ends inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace ceop
