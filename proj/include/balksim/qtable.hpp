#pragma once

#include <optional>
#include <unordered_map>

#include "balksim/rewards.hpp"
#include "balksim/rng.hpp"
#include "balksim/state.hpp"

namespace balksim {

struct ActionValues {
    double q_join = 0.0;
    double q_balk = 0.0;

    double of(Action a) const { return a == Action::Join ? q_join : q_balk; }
    double& of(Action a) { return a == Action::Join ? q_join : q_balk; }
    double max() const { return q_join > q_balk ? q_join : q_balk; }
};

/// Tabular action values; unseen states read as (0, 0).
class QTable {
public:
    using Map = std::unordered_map<StateKey, ActionValues, StateKeyHash>;

    ActionValues get(const StateKey& key) const {
        const auto it = map_.find(key);
        return it == map_.end() ? ActionValues{} : it->second;
    }

    ActionValues& slot(const StateKey& key) { return map_[key]; }

    std::size_t size() const { return map_.size(); }
    Map::const_iterator begin() const { return map_.begin(); }
    Map::const_iterator end() const { return map_.end(); }

private:
    Map map_;
};

/// Epsilon-greedy selection. Exact ties in the greedy branch fall back to
/// the seeded stream, so runs stay reproducible without a fixed bias.
inline Action select_action(const QTable& q, const StateKey& s, double epsilon,
                            Rng& rng) {
    if (epsilon < 0.0 || epsilon > 1.0) {
        throw std::invalid_argument("select_action: epsilon must lie in [0,1]");
    }
    if (epsilon > 0.0 && rng.uniform01() < epsilon) {
        return rng.uniform_below(2) == 0 ? Action::Join : Action::Balk;
    }
    const ActionValues v = q.get(s);
    if (v.q_join > v.q_balk) return Action::Join;
    if (v.q_balk > v.q_join) return Action::Balk;
    return rng.uniform_below(2) == 0 ? Action::Join : Action::Balk;
}

/// One Q-learning update. A missing next state marks a terminal decision
/// epoch and zeroes the bootstrap term. The explicit alpha overload
/// supports decayed learning rates.
inline void q_update(QTable& q, const StateKey& s, Action a, double r,
                     const std::optional<StateKey>& s_next, double alpha,
                     double gamma) {
    const double bootstrap = s_next.has_value() ? q.get(*s_next).max() : 0.0;
    double& value = q.slot(s).of(a);
    value += alpha * (r + gamma * bootstrap - value);
}

inline void q_update(QTable& q, const StateKey& s, Action a, double r,
                     const std::optional<StateKey>& s_next,
                     const LearningParams& params) {
    q_update(q, s, a, r, s_next, params.alpha, params.gamma);
}

}  // namespace balksim
