#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "balksim/events.hpp"

namespace balksim {

/// One queued unit of operator work.
struct Request {
    int robot_id = -1;
    EventId event = EventId::E1;
    double arrival_time = 0.0;
    bool is_failure = false;        // created by a balk that failed
    double expected_service = 0.0;  // mean service time of this request
};

enum class Discipline { FIFO, SJF };

inline const char* to_string(Discipline d) {
    return d == Discipline::FIFO ? "fifo" : "sjf";
}

/// Naor's balking threshold: floor(R*mu/C). A threshold-policy robot
/// joins iff the observed queue length is <= the returned value.
inline long long naor_threshold(double service_reward, double waiting_cost,
                                double mu) {
    if (waiting_cost <= 0.0) {
        throw std::invalid_argument("naor_threshold: waiting_cost must be > 0");
    }
    if (mu <= 0.0) {
        throw std::invalid_argument("naor_threshold: mu must be > 0");
    }
    if (service_reward < 0.0) {
        throw std::invalid_argument("naor_threshold: service_reward must be >= 0");
    }
    return static_cast<long long>(std::floor(service_reward * mu / waiting_cost));
}

/// The shared operator queue. Unbounded; at most one pending request per
/// robot. FIFO serves the oldest arrival, SJF the smallest expected
/// service time with ties broken by arrival order.
class OperatorQueue {
public:
    explicit OperatorQueue(Discipline d = Discipline::FIFO) : discipline_(d) {}

    void enqueue(Request req) {
        if (contains(req.robot_id)) {
            throw std::logic_error(
                "OperatorQueue: robot " + std::to_string(req.robot_id) +
                " already has a pending request");
        }
        pending_.push_back(std::move(req));
    }

    Request dequeue_next() {
        if (pending_.empty()) {
            throw std::logic_error("OperatorQueue: dequeue from empty queue");
        }
        std::size_t pick = 0;
        if (discipline_ == Discipline::SJF) {
            for (std::size_t i = 1; i < pending_.size(); ++i) {
                // strictly smaller only: equal expected service keeps the
                // earlier arrival, so ties are stable
                if (pending_[i].expected_service < pending_[pick].expected_service) {
                    pick = i;
                }
            }
        }
        Request out = pending_[pick];
        pending_.erase(pending_.begin() + static_cast<std::ptrdiff_t>(pick));
        return out;
    }

    bool contains(int robot_id) const {
        return std::any_of(pending_.begin(), pending_.end(),
                           [&](const Request& r) { return r.robot_id == robot_id; });
    }

    std::size_t size() const { return pending_.size(); }
    bool empty() const { return pending_.empty(); }
    const std::vector<Request>& pending() const { return pending_; }
    Discipline discipline() const { return discipline_; }

private:
    std::vector<Request> pending_;  // in arrival order
    Discipline discipline_;
};

}  // namespace balksim
