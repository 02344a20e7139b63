#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "balksim/sim.hpp"

namespace balksim {

/// State models. TL keys the joint state of the whole team; IL_U keys a
/// robot's local state; IL_O extends the local state with the queue size.
enum class Model { TL, IL_U, IL_O };

inline const char* to_string(Model m) {
    switch (m) {
        case Model::TL: return "tl";
        case Model::IL_U: return "il-u";
        case Model::IL_O: return "il-o";
    }
    throw std::logic_error("to_string: bad Model");
}

inline Model model_from_string(const std::string& s) {
    if (s == "tl") return Model::TL;
    if (s == "il-u") return Model::IL_U;
    if (s == "il-o") return Model::IL_O;
    throw std::invalid_argument("unknown model: " + s + " (expected tl, il-u or il-o)");
}

// S_b codes inside state keys: 0=Autonomy, 1=Waiting, 2=Failed, 3+j=event j.
inline constexpr std::int32_t kStatusAutonomy = 0;
inline constexpr std::int32_t kStatusWaiting = 1;
inline constexpr std::int32_t kStatusFailed = 2;
inline constexpr std::int32_t kStatusEventBase = 3;

inline std::int32_t status_code(Status status, int event_index) {
    switch (status) {
        case Status::Autonomy: return kStatusAutonomy;
        case Status::Waiting: return kStatusWaiting;
        case Status::Failed: return kStatusFailed;
        case Status::Event:
            if (event_index < 0) {
                throw std::invalid_argument("status_code: Event needs an event index");
            }
            return kStatusEventBase + event_index;
    }
    throw std::logic_error("status_code: bad Status");
}

/// Canonical, injective per-model key. The payload layout is
///   IL_U: [sb, n_tasks]
///   IL_O: [sb, n_tasks, s_q]
///   TL:   [sb_0, n_tasks_0, sb_1, n_tasks_1, ...]
struct StateKey {
    Model model = Model::IL_U;
    std::vector<std::int32_t> payload;

    bool operator==(const StateKey&) const = default;

    bool operator<(const StateKey& other) const {
        if (model != other.model) return model < other.model;
        return std::lexicographical_compare(payload.begin(), payload.end(),
                                            other.payload.begin(),
                                            other.payload.end());
    }
};

struct StateKeyHash {
    std::size_t operator()(const StateKey& k) const {
        std::uint64_t h = 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint64_t>(k.model);
        for (std::int32_t v : k.payload) {
            h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)));
        }
        return static_cast<std::size_t>(h);
    }
};

/// A robot's own observation at a decision point.
struct LocalView {
    Status status = Status::Event;
    int event_index = -1;  // valid while status == Event
    int n_tasks = 0;
};

using JointView = std::vector<LocalView>;

/// Build the model's state key from an observation. IL_O clamps the
/// queue-size feature to the team size; TL requires the joint view.
inline StateKey encode_state(const LocalView& robot_view, int queue_len,
                             const std::optional<JointView>& joint_view,
                             Model model, int n_robots) {
    StateKey key;
    key.model = model;
    switch (model) {
        case Model::IL_U:
            key.payload = {status_code(robot_view.status, robot_view.event_index),
                           robot_view.n_tasks};
            break;
        case Model::IL_O: {
            const std::int32_t s_q =
                std::clamp(queue_len, 0, n_robots);
            key.payload = {status_code(robot_view.status, robot_view.event_index),
                           robot_view.n_tasks, s_q};
            break;
        }
        case Model::TL: {
            if (!joint_view.has_value()) {
                throw std::invalid_argument("encode_state: TL requires the joint view");
            }
            key.payload.reserve(joint_view->size() * 2);
            for (const LocalView& v : *joint_view) {
                key.payload.push_back(status_code(v.status, v.event_index));
                key.payload.push_back(v.n_tasks);
            }
            break;
        }
    }
    return key;
}

/// Key for the deciding robot taken straight from a decision context.
inline StateKey encode_decision_state(const DecisionContext& ctx, Model model) {
    LocalView local{Status::Event, ctx.event_index, ctx.n_tasks};
    std::optional<JointView> joint;
    if (model == Model::TL) {
        JointView views;
        views.reserve(ctx.team.size());
        for (const DecisionContext::RobotView& v : ctx.team) {
            views.push_back(LocalView{v.status, v.event_index, v.n_tasks});
        }
        joint = std::move(views);
    }
    return encode_state(local, ctx.queue_len, joint, model,
                        static_cast<int>(ctx.team.size()));
}

namespace detail {

inline std::string sb_token(std::int32_t code) {
    if (code == kStatusAutonomy) return "A";
    if (code == kStatusWaiting) return "W";
    if (code == kStatusFailed) return "F";
    return "E" + std::to_string(code - kStatusEventBase + 1);
}

inline std::int32_t sb_code_from_token(const std::string& tok) {
    if (tok == "A") return kStatusAutonomy;
    if (tok == "W") return kStatusWaiting;
    if (tok == "F") return kStatusFailed;
    if (tok.size() >= 2 && tok[0] == 'E') {
        const int idx = std::stoi(tok.substr(1));
        if (idx >= 1) return kStatusEventBase + idx - 1;
    }
    throw std::invalid_argument("bad state token: " + tok);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace detail

/// Text form used by the policy files: "E1,3" (IL_U), "E1,3,2" (IL_O),
/// "E1,3|A,5" (TL, one pair per robot).
inline std::string state_key_to_string(const StateKey& key) {
    std::ostringstream os;
    if (key.model == Model::TL) {
        for (std::size_t i = 0; i + 1 < key.payload.size(); i += 2) {
            if (i > 0) os << '|';
            os << detail::sb_token(key.payload[i]) << ',' << key.payload[i + 1];
        }
    } else {
        os << detail::sb_token(key.payload[0]);
        for (std::size_t i = 1; i < key.payload.size(); ++i) {
            os << ',' << key.payload[i];
        }
    }
    return os.str();
}

inline StateKey state_key_from_string(Model model, const std::string& text) {
    StateKey key;
    key.model = model;
    try {
        if (model == Model::TL) {
            for (const std::string& pair : detail::split(text, '|')) {
                const std::vector<std::string> parts = detail::split(pair, ',');
                if (parts.size() != 2) {
                    throw std::invalid_argument("bad TL pair: " + pair);
                }
                key.payload.push_back(detail::sb_code_from_token(parts[0]));
                key.payload.push_back(std::stoi(parts[1]));
            }
        } else {
            const std::vector<std::string> parts = detail::split(text, ',');
            const std::size_t expected = model == Model::IL_U ? 2 : 3;
            if (parts.size() != expected) {
                throw std::invalid_argument("bad key arity: " + text);
            }
            key.payload.push_back(detail::sb_code_from_token(parts[0]));
            for (std::size_t i = 1; i < parts.size(); ++i) {
                key.payload.push_back(std::stoi(parts[i]));
            }
        }
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad state key: " + text);
    }
    return key;
}

}  // namespace balksim
