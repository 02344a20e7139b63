#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "balksim/rng.hpp"
#include "balksim/sim.hpp"

namespace balksim {

/// Parameter overrides that kick in at a given training episode.
struct ParamOverride {
    std::optional<double> mu;
    std::optional<std::vector<double>> mix;
};

/// Piecewise-constant non-stationarity schedule over episode indices.
struct Schedule {
    std::vector<std::pair<int, ParamOverride>> breakpoints;  // strictly increasing

    void validate() const {
        for (std::size_t i = 1; i < breakpoints.size(); ++i) {
            if (breakpoints[i].first <= breakpoints[i - 1].first) {
                throw std::invalid_argument(
                    "schedule: breakpoint episodes must be strictly increasing");
            }
        }
    }
};

/// Effective config for an episode: the latest breakpoint at or before it
/// wins; before the first breakpoint the base config applies.
inline SimConfig schedule_params(const SimConfig& base, int episode,
                                 const Schedule& schedule) {
    if (episode < 0) {
        throw std::invalid_argument("schedule_params: episode must be >= 0");
    }
    SimConfig cfg = base;
    const ParamOverride* active = nullptr;
    for (const auto& [at, over] : schedule.breakpoints) {
        if (at <= episode) {
            active = &over;
        } else {
            break;
        }
    }
    if (active != nullptr) {
        if (active->mu.has_value()) cfg.mu = *active->mu;
        if (active->mix.has_value()) cfg.catalog.mix = *active->mix;
        cfg.validate();
    }
    return cfg;
}

/// Uniform multiplicative perturbation of the rate estimates, drawn
/// independently per episode. Levels are capped below 1 so perturbed
/// rates stay positive.
struct NoiseSpec {
    double level = 0.0;  // fraction in [0, 0.9]
    bool on_lambda = true;
    bool on_mu = true;

    void validate() const {
        if (level < 0.0 || level > 0.9) {
            throw std::invalid_argument("noise level must lie in [0, 0.9]");
        }
    }
};

inline std::pair<double, double> inject_noise(double lambda, double mu,
                                              const NoiseSpec& spec, Rng& rng) {
    spec.validate();
    auto perturb = [&](double p) {
        const double d = (rng.uniform01() * 2.0 - 1.0) * spec.level;
        return p * (1.0 + d);
    };
    if (spec.on_lambda) lambda = perturb(lambda);
    if (spec.on_mu) mu = perturb(mu);
    return {lambda, mu};
}

}  // namespace balksim
