#pragma once

#include <stdexcept>
#include <string>

namespace balksim {

/// How the mean-service term used by the reward formulas is derived from
/// the service rate mu: Time reads it as a duration (1/mu), Rate uses mu
/// itself. Time is the default; Rate is kept as a switch because the two
/// readings produce very different reward scales.
enum class MuBarConvention { Time, Rate };

inline const char* to_string(MuBarConvention c) {
    return c == MuBarConvention::Time ? "time" : "rate";
}

struct LearningParams {
    double alpha = 0.1;    // learning rate, [0,1]; 0 disables learning
    double gamma = 0.9;    // discount, [0,1)
    double epsilon = 0.1;  // exploration probability, [0,1]
    double r_s = 1.0;      // reward for receiving service
    double r_f = -2.0;     // failure reward coefficient
    double r_t = 0.3;      // reward for a balk that worked out
    double mu_bar = 1.0 / 0.27;  // mean service time term
    double lambda_bar = 0.25;    // event arrival rate term
    MuBarConvention convention = MuBarConvention::Time;

    /// Recompute mu_bar/lambda_bar from the rates an episode actually
    /// runs with (they follow schedule shifts and injected noise).
    void refresh_rates(double lambda, double mu) {
        if (lambda <= 0.0 || mu <= 0.0) {
            throw std::invalid_argument("refresh_rates: rates must be > 0");
        }
        lambda_bar = lambda;
        mu_bar = convention == MuBarConvention::Time ? 1.0 / mu : mu;
    }

    void validate() const {
        if (alpha < 0.0 || alpha > 1.0) {
            throw std::invalid_argument("alpha must lie in [0,1]");
        }
        if (gamma < 0.0 || gamma >= 1.0) {
            throw std::invalid_argument("gamma must lie in [0,1)");
        }
        if (epsilon < 0.0 || epsilon > 1.0) {
            throw std::invalid_argument("epsilon must lie in [0,1]");
        }
        if (mu_bar <= 0.0) {
            throw std::invalid_argument("mu_bar must be > 0");
        }
        if (lambda_bar <= 0.0) {
            throw std::invalid_argument("lambda_bar must be > 0");
        }
    }
};

/// Reward for joining with n_q requests already pending: the service
/// reward minus the expected wait (queue ahead plus own service).
inline double reward_join(int n_q, const LearningParams& p, double t_serv) {
    if (n_q < 0) {
        throw std::invalid_argument("reward_join: n_q must be >= 0");
    }
    if (t_serv < 0.0) {
        throw std::invalid_argument("reward_join: t_serv must be >= 0");
    }
    return p.r_s - (static_cast<double>(n_q) * p.mu_bar + t_serv);
}

enum class BalkOutcome { Failed, Autonomy };

/// Reward for balking: a failure costs r_f scaled by service-time over
/// arrival-rate (softened by the queue pressure n_q that was avoided);
/// getting away with it pays the flat r_t.
inline double reward_balk(BalkOutcome outcome, int n_q, const LearningParams& p) {
    if (n_q < 0) {
        throw std::invalid_argument("reward_balk: n_q must be >= 0");
    }
    if (outcome == BalkOutcome::Failed) {
        return p.r_f * (p.mu_bar / p.lambda_bar) + static_cast<double>(n_q);
    }
    return p.r_t;
}

}  // namespace balksim
