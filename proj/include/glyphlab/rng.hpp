#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace glyphlab {

// Deterministic RNG used everywhere. Distributions are implemented by hand
// (Box-Muller for normals) so that streams depend only on the mt19937_64
// sequence, not on the standard library's distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    // Uniform in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n);

    // Uniform integer in [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(uniform_int(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // Standard normal via Box-Muller (pairs cached).
    double normal();

    bool bernoulli(double p) { return uniform() < p; }

    std::string serialize() const;
    void deserialize(const std::string& s);

private:
    std::mt19937_64 engine_;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

// Stable 64-bit FNV-1a hash, used to derive per-item seeds from string ids
// and to namespace child RNG streams.
std::uint64_t fnv1a64(const std::string& s);
std::uint64_t mix_seed(std::uint64_t seed, const std::string& tag);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t k);

}  // namespace glyphlab
