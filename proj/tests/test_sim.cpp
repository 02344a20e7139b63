#include "balksim/sim.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "balksim/policies.hpp"

namespace balksim {
namespace {

SimConfig small_config(std::uint64_t seed) {
    SimConfig cfg;
    cfg.seed = seed;
    return cfg;
}

LearningParams reward_params() {
    LearningParams p;
    p.refresh_rates(0.25, 0.27);
    return p;
}

/// Joins with a fixed probability drawn from the simulation stream.
class CoinFlipPolicy final : public DecisionPolicy {
public:
    explicit CoinFlipPolicy(double p_join) : p_join_(p_join) {}
    Action decide(const DecisionContext&, Rng& rng) override {
        return rng.bernoulli(p_join_) ? Action::Join : Action::Balk;
    }

private:
    double p_join_;
};

/// Records every decision context it is shown.
class CapturePolicy final : public DecisionPolicy {
public:
    Action decide(const DecisionContext& ctx, Rng& rng) override {
        contexts.push_back(ctx);
        return rng.bernoulli(0.5) ? Action::Join : Action::Balk;
    }
    std::vector<DecisionContext> contexts;
};

TEST(AssignTasks, FrozenExamples) {
    EXPECT_EQ(assign_tasks(30, 5), (std::vector<int>{6, 6, 6, 6, 6}));
    EXPECT_EQ(assign_tasks(31, 5), (std::vector<int>{7, 6, 6, 6, 6}));
    EXPECT_EQ(assign_tasks(0, 5), (std::vector<int>{0, 0, 0, 0, 0}));
    EXPECT_THROW(assign_tasks(10, 0), std::invalid_argument);
}

TEST(SimConfig, ValidateNamesOffendingField) {
    SimConfig cfg;
    cfg.lambda = -1.0;
    try {
        cfg.validate();
        FAIL() << "expected validation error";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("lambda"), std::string::npos);
    }

    cfg = SimConfig{};
    cfg.fail_service_multiplier = 0.5;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = SimConfig{};
    cfg.episode_event_horizon = 0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(RunEpisode, HorizonCountsDecisions) {
    AlwaysJoinPolicy policy;
    const EpisodeMetrics m = run_episode(small_config(1), reward_params(), policy);
    EXPECT_EQ(m.events_total, 20);
    EXPECT_EQ(m.joins_total, 20);
    EXPECT_EQ(m.balks_total, 0);
}

TEST(RunEpisode, DeterministicForSameSeed) {
    AlwaysJoinPolicy policy;
    Trace t1;
    Trace t2;
    const EpisodeMetrics a =
        run_episode(small_config(42), reward_params(), policy, nullptr, &t1);
    const EpisodeMetrics b =
        run_episode(small_config(42), reward_params(), policy, nullptr, &t2);
    EXPECT_EQ(a, b);
    ASSERT_EQ(t1.size(), t2.size());
    for (std::size_t i = 0; i < t1.size(); ++i) {
        EXPECT_EQ(t1[i].kind, t2[i].kind);
        EXPECT_EQ(t1[i].time, t2[i].time);
        EXPECT_EQ(t1[i].robot_id, t2[i].robot_id);
        EXPECT_EQ(t1[i].reward, t2[i].reward);
    }
    const EpisodeMetrics c =
        run_episode(small_config(43), reward_params(), policy);
    EXPECT_NE(a, c);
}

TEST(RunEpisode, AlwaysJoinNeverFails) {
    AlwaysJoinPolicy policy;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const EpisodeMetrics m =
            run_episode(small_config(seed), reward_params(), policy);
        ASSERT_EQ(m.failures_total, 0);
        ASSERT_EQ(m.balks_total, 0);
    }
}

TEST(RunEpisode, FearlessBalkerNeverIdlesWhenNothingFails) {
    SimConfig cfg = small_config(7);
    cfg.n_robots = 1;
    for (EventType& e : cfg.catalog.entries) {
        e.fail_prob = 0.0;
    }
    AlwaysBalkPolicy policy;
    const EpisodeMetrics m = run_episode(cfg, reward_params(), policy);
    EXPECT_EQ(m.failures_total, 0);
    EXPECT_EQ(m.events_total, 20);
    EXPECT_DOUBLE_EQ(m.idle_time_total, 0.0);
    EXPECT_DOUBLE_EQ(m.queue_wait_total, 0.0);
    // every successful balk pays r_t
    EXPECT_NEAR(m.team_reward, 20 * 0.3, 1e-9);
}

TEST(RunEpisode, ZeroTasksEndsImmediately) {
    SimConfig cfg = small_config(9);
    cfg.n_tasks_total = 0;
    AlwaysJoinPolicy policy;
    const EpisodeMetrics m = run_episode(cfg, reward_params(), policy);
    EXPECT_EQ(m.events_total, 0);
    EXPECT_DOUBLE_EQ(m.episode_duration, 0.0);
}

TEST(RunEpisode, TaskExhaustionEndsEpisodeEarly) {
    SimConfig cfg = small_config(11);
    cfg.n_robots = 2;
    cfg.n_tasks_total = 2;
    cfg.task_duration = 5.0;  // tasks finish fast relative to arrivals
    cfg.episode_event_horizon = 1000;
    CoinFlipPolicy policy(0.5);
    Trace trace;
    const EpisodeMetrics m =
        run_episode(cfg, reward_params(), policy, nullptr, &trace);
    EXPECT_LT(m.events_total, 1000);
    int tasks_done = 0;
    for (const TraceRecord& r : trace) {
        if (r.kind == TraceRecord::Kind::TaskDone) tasks_done += 1;
    }
    EXPECT_EQ(tasks_done, 2);
    EXPECT_EQ(trace.back().tasks_remaining_total, 0);
}

TEST(RunEpisode, DroppedArrivalsDoNotCountTowardHorizon) {
    SimConfig cfg = small_config(17);
    cfg.n_robots = 1;
    cfg.lambda = 5.0;  // arrivals pile up while the lone robot is served
    cfg.mu = 0.01;
    cfg.episode_event_horizon = 5;
    AlwaysJoinPolicy policy;
    Trace trace;
    const EpisodeMetrics m =
        run_episode(cfg, reward_params(), policy, nullptr, &trace);
    EXPECT_EQ(m.events_total, 5);
    int decisions = 0;
    int drops = 0;
    for (const TraceRecord& r : trace) {
        if (r.kind == TraceRecord::Kind::Decision) decisions += 1;
        if (r.kind == TraceRecord::Kind::ArrivalDropped) drops += 1;
    }
    EXPECT_EQ(decisions, 5);
    EXPECT_GT(drops, 0);
}

TEST(RunEpisode, DecisionContextIsConsistent) {
    SimConfig cfg = small_config(13);
    CapturePolicy policy;
    run_episode(cfg, reward_params(), policy);
    ASSERT_FALSE(policy.contexts.empty());
    for (std::size_t i = 0; i < policy.contexts.size(); ++i) {
        const DecisionContext& ctx = policy.contexts[i];
        EXPECT_EQ(ctx.decision_index, static_cast<int>(i));
        ASSERT_EQ(ctx.team.size(), 5u);
        const DecisionContext::RobotView& own =
            ctx.team[static_cast<std::size_t>(ctx.robot_id)];
        EXPECT_EQ(own.status, Status::Event);
        EXPECT_EQ(own.event_index, ctx.event_index);
        EXPECT_EQ(own.n_tasks, ctx.n_tasks);
        EXPECT_GE(ctx.queue_len, 0);
        EXPECT_GT(ctx.n_tasks, 0);  // only task-holding robots take events
    }
}

// Replays a trace through an independent ledger of queue length, operator
// business, task count and idle intervals, and cross-checks every record
// plus the final metrics.
void check_trace_invariants(const SimConfig& cfg, const Trace& trace,
                            const EpisodeMetrics& metrics) {
    int pending = 0;
    bool busy = false;
    int tasks_remaining = cfg.n_tasks_total;
    int decisions = 0;
    double idle_expected = 0.0;
    double wait_expected = 0.0;
    double last_time = 0.0;
    std::map<int, double> waiting_since;   // robot -> enqueue time
    std::map<int, double> in_queue_since;  // robot -> enqueue time (to start)

    for (const TraceRecord& rec : trace) {
        ASSERT_GE(rec.time, last_time);  // the clock never runs backwards
        last_time = rec.time;
        switch (rec.kind) {
            case TraceRecord::Kind::Decision: {
                decisions += 1;
                ASSERT_EQ(rec.queue_len_observed, pending);
                const bool enqueued =
                    rec.action == Action::Join || rec.failed;
                if (enqueued) {
                    pending += 1;
                    ASSERT_EQ(waiting_since.count(rec.robot_id), 0u);
                    waiting_since[rec.robot_id] = rec.time;
                    in_queue_since[rec.robot_id] = rec.time;
                }
                break;
            }
            case TraceRecord::Kind::ArrivalDropped:
                // a dropped arrival changes nothing; the ledger equality
                // checks below cover that
                break;
            case TraceRecord::Kind::ServiceStart: {
                ASSERT_FALSE(busy);
                ASSERT_GT(pending, 0);
                pending -= 1;
                busy = true;
                ASSERT_EQ(in_queue_since.count(rec.robot_id), 1u);
                wait_expected += rec.time - in_queue_since[rec.robot_id];
                in_queue_since.erase(rec.robot_id);
                break;
            }
            case TraceRecord::Kind::ServiceEnd: {
                ASSERT_TRUE(busy);
                busy = false;
                ASSERT_EQ(waiting_since.count(rec.robot_id), 1u);
                idle_expected += rec.time - waiting_since[rec.robot_id];
                waiting_since.erase(rec.robot_id);
                break;
            }
            case TraceRecord::Kind::TaskDone:
                tasks_remaining -= 1;
                ASSERT_GE(tasks_remaining, 0);
                break;
        }
        ASSERT_EQ(rec.queue_len_after, pending);
        ASSERT_EQ(rec.operator_busy_after, busy);
        ASSERT_EQ(rec.tasks_remaining_total, tasks_remaining);
    }

    // Fully drained at episode end.
    EXPECT_EQ(pending, 0);
    EXPECT_FALSE(busy);
    EXPECT_TRUE(waiting_since.empty());
    EXPECT_TRUE(in_queue_since.empty());

    EXPECT_EQ(metrics.events_total, decisions);
    EXPECT_LE(metrics.events_total, cfg.episode_event_horizon);
    EXPECT_EQ(metrics.events_total, metrics.joins_total + metrics.balks_total);
    EXPECT_LE(metrics.failures_total, metrics.balks_total);
    EXPECT_NEAR(metrics.idle_time_total, idle_expected, 1e-9);
    EXPECT_NEAR(metrics.queue_wait_total, wait_expected, 1e-9);
    EXPECT_GE(metrics.idle_time_total, metrics.queue_wait_total);
}

TEST(RunEpisode, TraceInvariantsHoldAcrossRandomizedEpisodes) {
    Rng gen(20250817);
    for (int round = 0; round < 1000; ++round) {
        SimConfig cfg;
        cfg.seed = gen.uniform_below(1u << 30);
        cfg.n_robots = 1 + static_cast<int>(gen.uniform_below(6));
        cfg.n_tasks_total = static_cast<int>(gen.uniform_below(40));
        cfg.episode_event_horizon = 1 + static_cast<int>(gen.uniform_below(30));
        cfg.task_duration = 5.0 + gen.uniform01() * 100.0;
        cfg.lambda = 0.05 + gen.uniform01();
        cfg.mu = 0.05 + gen.uniform01();
        cfg.discipline = gen.bernoulli(0.5) ? Discipline::FIFO : Discipline::SJF;
        if (gen.bernoulli(0.3)) {
            cfg.catalog = EventCatalog::sjf_demo_catalog();
        }
        CoinFlipPolicy policy(gen.uniform01());
        Trace trace;
        const EpisodeMetrics m =
            run_episode(cfg, reward_params(), policy, nullptr, &trace);
        check_trace_invariants(cfg, trace, m);
    }
}

TEST(RunEpisode, RewardsInTraceMatchFormulas) {
    SimConfig cfg = small_config(99);
    const LearningParams p = reward_params();
    CoinFlipPolicy policy(0.5);
    Trace trace;
    run_episode(cfg, p, policy, nullptr, &trace);
    for (const TraceRecord& rec : trace) {
        if (rec.kind != TraceRecord::Kind::Decision) continue;
        const EventType& et =
            cfg.catalog.entries[static_cast<std::size_t>(rec.event_index)];
        if (rec.action == Action::Join) {
            const double t_serv = et.service_multiplier / cfg.mu;
            ASSERT_NEAR(rec.reward,
                        reward_join(rec.queue_len_observed, p, t_serv), 1e-12);
        } else if (rec.failed) {
            ASSERT_NEAR(rec.reward,
                        reward_balk(BalkOutcome::Failed, rec.queue_len_observed, p),
                        1e-12);
        } else {
            ASSERT_NEAR(rec.reward, p.r_t, 1e-12);
        }
    }
}

TEST(NaorPolicy, JoinsExactlyUpToThreshold) {
    NaorPolicy policy(2);
    Rng rng(1);
    DecisionContext ctx;
    ctx.queue_len = 2;
    EXPECT_EQ(policy.decide(ctx, rng), Action::Join);
    ctx.queue_len = 3;
    EXPECT_EQ(policy.decide(ctx, rng), Action::Balk);
    const NaorPolicy from_rates(1.0, 0.1, 2.0);
    EXPECT_EQ(from_rates.threshold(), 20);
}

}  // namespace
}  // namespace balksim
