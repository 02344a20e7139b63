#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "balksim/rng.hpp"

namespace balksim {

/// Typed failure events a robot can hit while operating autonomously.
enum class EventId { E1, E2, E3 };

inline constexpr std::size_t kNumEventIds = 3;

inline const char* to_string(EventId id) {
    switch (id) {
        case EventId::E1: return "E1";
        case EventId::E2: return "E2";
        case EventId::E3: return "E3";
    }
    throw std::logic_error("to_string: bad EventId");
}

inline EventId event_id_from_string(const std::string& s) {
    if (s == "E1") return EventId::E1;
    if (s == "E2") return EventId::E2;
    if (s == "E3") return EventId::E3;
    throw std::invalid_argument("unknown event id: " + s);
}

struct EventType {
    EventId id;
    std::string label;
    double fail_prob;           // probability a balked event turns into a failure
    double service_multiplier;  // scale on the mean operator service duration
};

/// The set of event types in play plus the probability mix they are
/// drawn from when an arrival fires.
struct EventCatalog {
    std::vector<EventType> entries;
    std::vector<double> mix;  // same length as entries, sums to 1

    void validate() const {
        if (entries.empty()) {
            throw std::invalid_argument("catalog: entries must be non-empty");
        }
        if (mix.size() != entries.size()) {
            throw std::invalid_argument("catalog: |mix| must equal |entries|");
        }
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const EventType& e = entries[i];
            if (e.fail_prob < 0.0 || e.fail_prob > 1.0) {
                throw std::invalid_argument("catalog: fail_prob of " + e.label +
                                            " must lie in [0,1]");
            }
            if (e.service_multiplier <= 0.0) {
                throw std::invalid_argument("catalog: service_multiplier of " +
                                            e.label + " must be > 0");
            }
            for (std::size_t j = i + 1; j < entries.size(); ++j) {
                if (entries[j].id == e.id) {
                    throw std::invalid_argument("catalog: duplicate event id " +
                                                std::string(to_string(e.id)));
                }
            }
        }
        double sum = 0.0;
        for (double w : mix) {
            if (w < 0.0) {
                throw std::invalid_argument("catalog: mix components must be >= 0");
            }
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw std::invalid_argument("catalog: mix must sum to 1 within 1e-9");
        }
    }

    std::size_t index_of(EventId id) const {
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (entries[i].id == id) return i;
        }
        throw std::invalid_argument("catalog: event id not present");
    }

    /// Draw an entry index according to the mix.
    std::size_t sample_index(Rng& rng) const {
        const double u = rng.uniform01();
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < mix.size(); ++i) {
            acc += mix[i];
            if (u < acc) return i;
        }
        return mix.size() - 1;
    }

    /// Three event classes with their default failure probabilities and a
    /// uniform draw mix.
    static EventCatalog default_catalog() {
        EventCatalog c;
        c.entries = {
            {EventId::E1, "battery-recharge", 0.9, 1.0},
            {EventId::E2, "dangerous-area", 0.4, 1.0},
            {EventId::E3, "connection-loss", 0.2, 1.0},
        };
        c.mix = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
        return c;
    }

    /// Variant with spread-out service multipliers. The default catalog
    /// gives every type the same mean service time, under which SJF
    /// collapses to FIFO; this preset makes the SJF discipline visible.
    static EventCatalog sjf_demo_catalog() {
        EventCatalog c = default_catalog();
        c.entries[0].service_multiplier = 1.0;
        c.entries[1].service_multiplier = 1.5;
        c.entries[2].service_multiplier = 0.5;
        return c;
    }
};

}  // namespace balksim
