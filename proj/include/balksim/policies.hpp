#pragma once

#include <vector>

#include "balksim/qtable.hpp"
#include "balksim/queue.hpp"
#include "balksim/sim.hpp"

namespace balksim {

struct AlwaysJoinPolicy final : DecisionPolicy {
    Action decide(const DecisionContext&, Rng&) override { return Action::Join; }
};

struct AlwaysBalkPolicy final : DecisionPolicy {
    Action decide(const DecisionContext&, Rng&) override { return Action::Balk; }
};

/// Static threshold policy: join iff the observed queue length is at most
/// the threshold computed from (service reward, waiting cost, mu).
class NaorPolicy final : public DecisionPolicy {
public:
    explicit NaorPolicy(long long threshold) : threshold_(threshold) {}

    NaorPolicy(double service_reward, double waiting_cost, double mu)
        : threshold_(naor_threshold(service_reward, waiting_cost, mu)) {}

    Action decide(const DecisionContext& ctx, Rng&) override {
        return ctx.queue_len <= threshold_ ? Action::Join : Action::Balk;
    }

    long long threshold() const { return threshold_; }

private:
    long long threshold_;
};

/// Frozen greedy execution of a trained table set. Reads are const, so
/// one instance can serve concurrent evaluation runs; exact ties use the
/// per-run seeded stream.
class GreedyTablePolicy final : public DecisionPolicy {
public:
    GreedyTablePolicy(Model model, const std::vector<QTable>& tables)
        : model_(model), tables_(&tables) {}

    Action decide(const DecisionContext& ctx, Rng& rng) override {
        const StateKey key = encode_decision_state(ctx, model_);
        const std::size_t owner =
            model_ == Model::TL ? 0 : static_cast<std::size_t>(ctx.robot_id);
        return select_action((*tables_)[owner], key, 0.0, rng);
    }

    Model model() const { return model_; }

private:
    Model model_;
    const std::vector<QTable>* tables_;
};

}  // namespace balksim
