#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "balksim/policies.hpp"
#include "balksim/qtable.hpp"
#include "balksim/schedule.hpp"
#include "balksim/sim.hpp"

namespace balksim {

/// One committed Q-learning transition, exposed for replay checks.
struct UpdateRecord {
    int owner = 0;
    StateKey state;
    Action action = Action::Join;
    double reward = 0.0;
    std::optional<StateKey> next_state;  // empty at a terminal epoch
};

using UpdateLog = std::vector<UpdateRecord>;

/// Epsilon-greedy Q-learning over decision epochs. IL models keep one
/// table per robot, fed only by that robot's decisions; TL keeps a single
/// table over joint states fed by every decision. A decision's update is
/// committed when its owner next decides (the state observed then is the
/// bootstrap state) or with a zero bootstrap at episode end.
class QLearningSystem final : public DecisionPolicy, public LearnerHook {
public:
    QLearningSystem(Model model, int n_robots, LearningParams params)
        : model_(model),
          n_owners_(model == Model::TL ? 1 : n_robots),
          params_(std::move(params)),
          tables_(static_cast<std::size_t>(n_owners_)),
          pending_(static_cast<std::size_t>(n_owners_)),
          visits_(static_cast<std::size_t>(n_owners_)) {
        params_.validate();
    }

    /// Optional per-visit learning rate, e.g. 1/k decay; visit counts are
    /// kept per (state, action).
    void set_alpha_schedule(std::function<double(std::uint64_t)> schedule) {
        alpha_schedule_ = std::move(schedule);
    }

    void set_update_log(UpdateLog* log) { update_log_ = log; }

    void set_rates(double lambda, double mu) { params_.refresh_rates(lambda, mu); }

    Action decide(const DecisionContext& ctx, Rng& rng) override {
        const int owner = owner_of(ctx);
        const StateKey key = encode_decision_state(ctx, model_);
        commit(owner, key);
        return select_action(tables_[static_cast<std::size_t>(owner)], key,
                             params_.epsilon, rng);
    }

    void on_decision(const DecisionContext& ctx, Action action,
                     double reward) override {
        const int owner = owner_of(ctx);
        Pending& p = pending_[static_cast<std::size_t>(owner)];
        p.state = encode_decision_state(ctx, model_);
        p.action = action;
        p.reward = reward;
        p.armed = true;
    }

    void on_episode_end() override {
        for (int owner = 0; owner < n_owners_; ++owner) {
            commit_terminal(owner);
        }
    }

    const LearningParams& params() const { return params_; }
    Model model() const { return model_; }
    const std::vector<QTable>& tables() const { return tables_; }
    std::vector<QTable> take_tables() { return std::move(tables_); }

private:
    struct Pending {
        StateKey state;
        Action action = Action::Join;
        double reward = 0.0;
        bool armed = false;
    };

    int owner_of(const DecisionContext& ctx) const {
        return model_ == Model::TL ? 0 : ctx.robot_id;
    }

    double next_alpha(int owner, const StateKey& s, Action a) {
        if (!alpha_schedule_) return params_.alpha;
        auto& counts = visits_[static_cast<std::size_t>(owner)][s];
        std::uint64_t& k = counts[a == Action::Join ? 0 : 1];
        k += 1;
        return alpha_schedule_(k);
    }

    void apply_update(int owner, const Pending& p,
                      const std::optional<StateKey>& next) {
        const double alpha = next_alpha(owner, p.state, p.action);
        q_update(tables_[static_cast<std::size_t>(owner)], p.state, p.action,
                 p.reward, next, alpha, params_.gamma);
        if (update_log_ != nullptr) {
            update_log_->push_back(
                UpdateRecord{owner, p.state, p.action, p.reward, next});
        }
    }

    void commit(int owner, const StateKey& observed_now) {
        Pending& p = pending_[static_cast<std::size_t>(owner)];
        if (!p.armed) return;
        apply_update(owner, p, observed_now);
        p.armed = false;
    }

    void commit_terminal(int owner) {
        Pending& p = pending_[static_cast<std::size_t>(owner)];
        if (!p.armed) return;
        apply_update(owner, p, std::nullopt);
        p.armed = false;
    }

    Model model_;
    int n_owners_;
    LearningParams params_;
    std::vector<QTable> tables_;
    std::vector<Pending> pending_;
    std::vector<std::unordered_map<StateKey, std::array<std::uint64_t, 2>, StateKeyHash>>
        visits_;
    std::function<double(std::uint64_t)> alpha_schedule_;
    UpdateLog* update_log_ = nullptr;
};

struct TrainResult {
    Model model = Model::IL_O;
    std::vector<QTable> tables;
    std::vector<double> curve;  // team reward per episode
};

struct TrainOptions {
    std::optional<Schedule> schedule;
    std::optional<NoiseSpec> noise;  // per-episode rate perturbation
    std::function<double(std::uint64_t)> alpha_schedule;
    UpdateLog* update_log = nullptr;
};

/// Full learning phase: n_episodes seeded episodes, tables carried
/// across, reward rates refreshed from each episode's effective config.
inline TrainResult train(const SimConfig& base, Model model,
                         const LearningParams& params, int n_episodes,
                         std::uint64_t master_seed,
                         const TrainOptions& options = {}) {
    if (n_episodes < 1) {
        throw std::invalid_argument("train: n_episodes must be >= 1");
    }
    base.validate();
    if (options.schedule.has_value()) {
        options.schedule->validate();
    }
    if (options.noise.has_value()) {
        options.noise->validate();
    }
    QLearningSystem learner(model, base.n_robots, params);
    if (options.alpha_schedule) {
        learner.set_alpha_schedule(options.alpha_schedule);
    }
    learner.set_update_log(options.update_log);

    TrainResult result;
    result.model = model;
    result.curve.reserve(static_cast<std::size_t>(n_episodes));
    for (int episode = 0; episode < n_episodes; ++episode) {
        SimConfig cfg = options.schedule.has_value()
                            ? schedule_params(base, episode, *options.schedule)
                            : base;
        cfg.seed = derive_seed(master_seed, Stream::TrainEpisode,
                               static_cast<std::uint64_t>(episode));
        if (options.noise.has_value()) {
            Rng noise_rng(derive_seed(cfg.seed, Stream::NoiseDraw, 0));
            const auto [lambda, mu] =
                inject_noise(cfg.lambda, cfg.mu, *options.noise, noise_rng);
            cfg.lambda = lambda;
            cfg.mu = mu;
        }
        learner.set_rates(cfg.lambda, cfg.mu);
        const EpisodeMetrics metrics =
            run_episode(cfg, learner.params(), learner, &learner);
        result.curve.push_back(metrics.team_reward);
    }
    result.tables = learner.take_tables();
    return result;
}

}  // namespace balksim
