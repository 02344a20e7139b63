#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace balksim {

/// Inverse-CDF exponential sample from a uniform draw u in (0,1).
inline double exp_from_uniform(double u, double rate) {
    if (rate <= 0.0) {
        throw std::invalid_argument("exp_from_uniform: rate must be > 0");
    }
    if (u <= 0.0 || u >= 1.0) {
        throw std::invalid_argument("exp_from_uniform: u must lie in (0,1)");
    }
    return -std::log(u) / rate;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Counter-based seed derivation: (master, stream, index) -> child seed.
/// Children are independent of how many siblings exist, so adding
/// replications or episodes never perturbs earlier streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index) {
    return splitmix64(splitmix64(master ^ splitmix64(stream)) + index);
}

/// Named sub-streams hung off a master seed.
enum class Stream : std::uint64_t {
    TrainEpisode = 1,
    TestRun = 2,
    NoiseDraw = 3,
    Scenario = 4,
};

inline std::uint64_t derive_seed(std::uint64_t master, Stream stream,
                                 std::uint64_t index) {
    return derive_seed(master, static_cast<std::uint64_t>(stream), index);
}

/// Deterministic seeded generator used everywhere in the simulator.
/// All draws reduce to the raw 64-bit engine output, so a (seed, call
/// sequence) pair reproduces bit-identically on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0,1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in the open interval (0,1); zero draws are rejected.
    double uniform_open01() {
        double u;
        do {
            u = uniform01();
        } while (u == 0.0);
        return u;
    }

    /// Uniform integer in [0, n). Rejection sampling keeps it unbiased.
    std::uint64_t uniform_below(std::uint64_t n) {
        if (n == 0) {
            throw std::invalid_argument("uniform_below: n must be >= 1");
        }
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    bool bernoulli(double p) { return uniform01() < p; }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

/// Exponential draw with the given rate; u = 0 is excluded so the
/// result is always finite.
inline double sample_exponential(Rng& rng, double rate) {
    if (rate <= 0.0) {
        throw std::invalid_argument("sample_exponential: rate must be > 0");
    }
    return exp_from_uniform(rng.uniform_open01(), rate);
}

}  // namespace balksim
