#pragma once

#include <cassert>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "balksim/events.hpp"
#include "balksim/queue.hpp"
#include "balksim/rewards.hpp"
#include "balksim/rng.hpp"

namespace balksim {

enum class Status { Autonomy, Event, Waiting, Failed };

inline const char* to_string(Status s) {
    switch (s) {
        case Status::Autonomy: return "A";
        case Status::Event: return "E";
        case Status::Waiting: return "W";
        case Status::Failed: return "F";
    }
    throw std::logic_error("to_string: bad Status");
}

enum class Action { Join, Balk };

inline const char* to_string(Action a) {
    return a == Action::Join ? "join" : "balk";
}

struct RobotState {
    int id = 0;
    Status status = Status::Autonomy;
    EventId event = EventId::E1;  // meaningful while status == Event
    int n_tasks = 0;
    double task_progress = 0.0;  // seconds into the current task
    std::optional<double> idle_since;  // set while Waiting or Failed
    double idle_accum = 0.0;        // request issued -> service completed
    double queue_wait_accum = 0.0;  // request issued -> service started
};

struct SimConfig {
    int n_robots = 5;
    int n_tasks_total = 30;
    double lambda = 0.25;  // event arrival rate, events per second
    double mu = 0.27;      // operator service rate, services per second
    int episode_event_horizon = 20;
    double task_duration = 60.0;  // seconds of autonomy per task
    double fail_service_multiplier = 2.0;  // extra operator time after a failure
    EventCatalog catalog = EventCatalog::default_catalog();
    Discipline discipline = Discipline::FIFO;
    std::uint64_t seed = 1;

    void validate() const {
        if (n_robots < 1) {
            throw std::invalid_argument("n_robots must be >= 1");
        }
        if (n_tasks_total < 0) {
            throw std::invalid_argument("n_tasks_total must be >= 0");
        }
        if (lambda <= 0.0) {
            throw std::invalid_argument("lambda must be > 0");
        }
        if (mu <= 0.0) {
            throw std::invalid_argument("mu must be > 0");
        }
        if (episode_event_horizon < 1) {
            throw std::invalid_argument("episode_event_horizon must be >= 1");
        }
        if (task_duration <= 0.0) {
            throw std::invalid_argument("task_duration must be > 0");
        }
        if (fail_service_multiplier < 1.0) {
            throw std::invalid_argument("fail_service_multiplier must be >= 1");
        }
        catalog.validate();
    }
};

struct EpisodeMetrics {
    double team_reward = 0.0;
    double idle_time_total = 0.0;   // headline: request issued -> service done
    double queue_wait_total = 0.0;  // request issued -> service started
    int events_total = 0;
    int failures_total = 0;
    int joins_total = 0;
    int balks_total = 0;
    double episode_duration = 0.0;

    bool operator==(const EpisodeMetrics&) const = default;
};

/// Round-robin task split; lower-index robots take the remainder.
inline std::vector<int> assign_tasks(int n_tasks_total, int n_robots) {
    if (n_robots < 1) {
        throw std::invalid_argument("assign_tasks: n_robots must be >= 1");
    }
    if (n_tasks_total < 0) {
        throw std::invalid_argument("assign_tasks: n_tasks_total must be >= 0");
    }
    std::vector<int> out(static_cast<std::size_t>(n_robots),
                         n_tasks_total / n_robots);
    for (int i = 0; i < n_tasks_total % n_robots; ++i) {
        out[static_cast<std::size_t>(i)] += 1;
    }
    return out;
}

/// Everything a decision policy may look at when a robot must choose
/// between joining the queue and balking.
struct DecisionContext {
    struct RobotView {
        Status status = Status::Autonomy;
        int event_index = -1;  // catalog index, valid while status == Event
        int n_tasks = 0;
    };

    int robot_id = 0;
    EventId event = EventId::E1;
    int event_index = 0;  // catalog index of the event
    int n_tasks = 0;      // deciding robot's remaining tasks
    int queue_len = 0;    // pending requests, in-service excluded, before own join
    double time = 0.0;
    int decision_index = 0;  // 0-based within the episode
    std::vector<RobotView> team;  // deciding robot appears with status Event
};

class DecisionPolicy {
public:
    virtual ~DecisionPolicy() = default;
    virtual Action decide(const DecisionContext& ctx, Rng& rng) = 0;
};

/// Receives every resolved decision; wiring point for Q-learning.
class LearnerHook {
public:
    virtual ~LearnerHook() = default;
    virtual void on_decision(const DecisionContext& ctx, Action action,
                             double reward) = 0;
    virtual void on_episode_end() = 0;
};

/// Step-by-step record of one episode, enough to recompute the timing
/// and queue invariants from outside the simulator.
struct TraceRecord {
    enum class Kind {
        Decision,
        ArrivalDropped,
        ServiceStart,
        ServiceEnd,
        TaskDone,
    };
    Kind kind{};
    double time = 0.0;
    int robot_id = -1;
    int event_index = -1;          // Decision only
    Action action = Action::Join;  // Decision only
    bool failed = false;           // Decision only
    double reward = 0.0;           // Decision only
    int queue_len_observed = -1;   // Decision only
    int queue_len_after = 0;       // |pending| once this record's effects applied
    bool operator_busy_after = false;
    int tasks_remaining_total = 0;
};

using Trace = std::vector<TraceRecord>;

/// Seeded discrete-event simulation of one mission episode. Single
/// threaded; independent replications each own their instance.
class Simulation {
public:
    Simulation(const SimConfig& cfg, const LearningParams& reward_params)
        : cfg_(cfg),
          reward_params_(reward_params),
          rng_(cfg.seed),
          queue_(cfg.discipline) {
        cfg_.validate();
        const std::vector<int> tasks = assign_tasks(cfg_.n_tasks_total, cfg_.n_robots);
        robots_.resize(static_cast<std::size_t>(cfg_.n_robots));
        for (int i = 0; i < cfg_.n_robots; ++i) {
            robots_[static_cast<std::size_t>(i)].id = i;
            robots_[static_cast<std::size_t>(i)].n_tasks =
                tasks[static_cast<std::size_t>(i)];
        }
    }

    EpisodeMetrics run(DecisionPolicy& policy, LearnerHook* learner = nullptr,
                       Trace* trace = nullptr) {
        policy_ = &policy;
        learner_ = learner;
        trace_ = trace;
        if (cfg_.episode_event_horizon >= 1 && total_tasks_remaining() > 0) {
            push_event(SimEvent::Kind::Arrival, clock_ + sample_exponential(rng_, cfg_.lambda), -1);
        }
        while (!calendar_.empty()) {
            advance();
        }
        if (learner_ != nullptr) {
            learner_->on_episode_end();
        }
        for (const RobotState& r : robots_) {
            metrics_.idle_time_total += r.idle_accum;
            metrics_.queue_wait_total += r.queue_wait_accum;
            assert(!r.idle_since.has_value());
        }
        assert(queue_.empty());
        assert(!in_service_.has_value());
        assert(metrics_.events_total == metrics_.joins_total + metrics_.balks_total);
        assert(metrics_.failures_total <= metrics_.balks_total);
        metrics_.episode_duration = clock_;
        return metrics_;
    }

    const std::vector<RobotState>& robots() const { return robots_; }
    double clock() const { return clock_; }

private:
    struct SimEvent {
        enum class Kind { ServiceCompletion = 0, Arrival = 1 };
        double time = 0.0;
        Kind kind = Kind::Arrival;
        int robot_id = -1;
        std::uint64_t seq = 0;
    };

    struct EventLater {
        bool operator()(const SimEvent& a, const SimEvent& b) const {
            if (a.time != b.time) return a.time > b.time;
            // coincident entries: completions resolve before arrivals, so an
            // arriving robot always observes the updated queue
            if (a.kind != b.kind) return a.kind > b.kind;
            return a.seq > b.seq;
        }
    };

    struct InService {
        Request request;
        double completion_time = 0.0;
    };

    void push_event(SimEvent::Kind kind, double time, int robot_id) {
        assert(time >= clock_);
        calendar_.push(SimEvent{time, kind, robot_id, seq_++});
    }

    /// Pop the earliest calendar entry and process exactly one occurrence.
    void advance() {
        const SimEvent ev = calendar_.top();
        calendar_.pop();
        advance_task_progress(ev.time - clock_, ev.time);
        clock_ = ev.time;
        if (ev.kind == SimEvent::Kind::Arrival) {
            process_arrival();
        } else {
            process_completion(ev.robot_id);
        }
    }

    void advance_task_progress(double dt, double record_time) {
        for (RobotState& r : robots_) {
            if (r.status != Status::Autonomy || r.n_tasks <= 0) continue;
            r.task_progress += dt;
            while (r.task_progress >= cfg_.task_duration && r.n_tasks > 0) {
                r.task_progress -= cfg_.task_duration;
                r.n_tasks -= 1;
                emit(TraceRecord::Kind::TaskDone, record_time, r.id);
            }
            if (r.n_tasks == 0) {
                r.task_progress = 0.0;
            }
        }
    }

    void process_arrival() {
        const std::size_t event_index = cfg_.catalog.sample_index(rng_);
        std::vector<int> eligible;
        for (const RobotState& r : robots_) {
            if (r.status == Status::Autonomy && r.n_tasks > 0) {
                eligible.push_back(r.id);
            }
        }
        if (eligible.empty()) {
            emit(TraceRecord::Kind::ArrivalDropped, clock_, -1);
            schedule_next_arrival();
            return;
        }
        const int robot_id = eligible[static_cast<std::size_t>(
            rng_.uniform_below(eligible.size()))];
        RobotState& robot = robots_[static_cast<std::size_t>(robot_id)];
        robot.status = Status::Event;
        robot.event = cfg_.catalog.entries[event_index].id;

        const DecisionContext ctx = build_context(robot_id, event_index);
        const Action action = policy_->decide(ctx, rng_);
        apply_decision(robot, event_index, action, ctx);
        schedule_next_arrival();
    }

    DecisionContext build_context(int robot_id, std::size_t event_index) const {
        DecisionContext ctx;
        ctx.robot_id = robot_id;
        ctx.event = cfg_.catalog.entries[event_index].id;
        ctx.event_index = static_cast<int>(event_index);
        ctx.n_tasks = robots_[static_cast<std::size_t>(robot_id)].n_tasks;
        ctx.queue_len = static_cast<int>(queue_.size());
        ctx.time = clock_;
        ctx.decision_index = metrics_.events_total;
        ctx.team.reserve(robots_.size());
        for (const RobotState& r : robots_) {
            DecisionContext::RobotView view;
            view.status = r.status;
            view.event_index = r.status == Status::Event
                                   ? static_cast<int>(cfg_.catalog.index_of(r.event))
                                   : -1;
            view.n_tasks = r.n_tasks;
            ctx.team.push_back(view);
        }
        return ctx;
    }

    void apply_decision(RobotState& robot, std::size_t event_index, Action action,
                        const DecisionContext& ctx) {
        const EventType& et = cfg_.catalog.entries[event_index];
        const int observed = ctx.queue_len;
        double reward = 0.0;
        bool failed = false;
        if (action == Action::Join) {
            metrics_.joins_total += 1;
            const double t_serv = et.service_multiplier / cfg_.mu;
            reward = reward_join(observed, reward_params_, t_serv);
            robot.status = Status::Waiting;
            robot.idle_since = clock_;
            queue_.enqueue(Request{robot.id, et.id, clock_, false, t_serv});
        } else {
            metrics_.balks_total += 1;
            const double u = rng_.uniform01();
            if (u < et.fail_prob) {
                failed = true;
                metrics_.failures_total += 1;
                reward = reward_balk(BalkOutcome::Failed, observed, reward_params_);
                robot.status = Status::Failed;
                robot.idle_since = clock_;
                queue_.enqueue(Request{
                    robot.id, et.id, clock_, true,
                    et.service_multiplier * cfg_.fail_service_multiplier / cfg_.mu});
            } else {
                reward = reward_balk(BalkOutcome::Autonomy, observed, reward_params_);
                robot.status = Status::Autonomy;
            }
        }
        metrics_.events_total += 1;
        metrics_.team_reward += reward;

        if (trace_ != nullptr) {
            TraceRecord rec;
            rec.kind = TraceRecord::Kind::Decision;
            rec.time = clock_;
            rec.robot_id = robot.id;
            rec.event_index = static_cast<int>(event_index);
            rec.action = action;
            rec.failed = failed;
            rec.reward = reward;
            rec.queue_len_observed = observed;
            fill_common(rec);
            trace_->push_back(rec);
        }
        if (learner_ != nullptr) {
            learner_->on_decision(ctx, action, reward);
        }
        // Start service only after the decision record is emitted, so the
        // trace stays causal: the join's +1 precedes the service's -1.
        if (!queue_.empty() && !in_service_.has_value()) {
            start_next_service();
        }
    }

    void schedule_next_arrival() {
        if (metrics_.events_total >= cfg_.episode_event_horizon) return;
        if (total_tasks_remaining() == 0) return;  // no robot can take an event again
        push_event(SimEvent::Kind::Arrival, clock_ + sample_exponential(rng_, cfg_.lambda), -1);
    }

    void start_next_service() {
        assert(!in_service_.has_value());
        Request req = queue_.dequeue_next();
        RobotState& robot = robots_[static_cast<std::size_t>(req.robot_id)];
        robot.queue_wait_accum += clock_ - req.arrival_time;
        const EventType& et =
            cfg_.catalog.entries[cfg_.catalog.index_of(req.event)];
        const double scale =
            et.service_multiplier * (req.is_failure ? cfg_.fail_service_multiplier : 1.0);
        const double duration = sample_exponential(rng_, cfg_.mu) * scale;
        in_service_ = InService{req, clock_ + duration};
        push_event(SimEvent::Kind::ServiceCompletion, clock_ + duration, req.robot_id);
        emit(TraceRecord::Kind::ServiceStart, clock_, req.robot_id);
    }

    void process_completion(int robot_id) {
        assert(in_service_.has_value() &&
               in_service_->request.robot_id == robot_id);
        RobotState& robot = robots_[static_cast<std::size_t>(robot_id)];
        assert(robot.idle_since.has_value());
        robot.idle_accum += clock_ - *robot.idle_since;
        robot.idle_since.reset();
        robot.status = Status::Autonomy;
        in_service_.reset();
        emit(TraceRecord::Kind::ServiceEnd, clock_, robot_id);
        if (!queue_.empty()) {
            start_next_service();
        }
    }

    int total_tasks_remaining() const {
        int total = 0;
        for (const RobotState& r : robots_) total += r.n_tasks;
        return total;
    }

    void emit(TraceRecord::Kind kind, double time, int robot_id) {
        if (trace_ == nullptr) return;
        TraceRecord rec;
        rec.kind = kind;
        rec.time = time;
        rec.robot_id = robot_id;
        fill_common(rec);
        trace_->push_back(rec);
    }

    void fill_common(TraceRecord& rec) const {
        rec.queue_len_after = static_cast<int>(queue_.size());
        rec.operator_busy_after = in_service_.has_value();
        rec.tasks_remaining_total = total_tasks_remaining();
    }

    SimConfig cfg_;
    LearningParams reward_params_;
    Rng rng_;
    double clock_ = 0.0;
    std::uint64_t seq_ = 0;
    std::vector<RobotState> robots_;
    OperatorQueue queue_;
    std::optional<InService> in_service_;
    std::priority_queue<SimEvent, std::vector<SimEvent>, EventLater> calendar_;
    EpisodeMetrics metrics_;
    DecisionPolicy* policy_ = nullptr;
    LearnerHook* learner_ = nullptr;
    Trace* trace_ = nullptr;
};

/// One full episode under the given policy.
inline EpisodeMetrics run_episode(const SimConfig& cfg,
                                  const LearningParams& reward_params,
                                  DecisionPolicy& policy,
                                  LearnerHook* learner = nullptr,
                                  Trace* trace = nullptr) {
    Simulation sim(cfg, reward_params);
    return sim.run(policy, learner, trace);
}

}  // namespace balksim
