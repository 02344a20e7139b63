#pragma once

#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "balksim/rewards.hpp"
#include "balksim/sim.hpp"

namespace balksim {

/// Resolved run configuration: simulator settings plus learning/reward
/// parameters. Produced by parse_config with every invariant validated.
struct RunConfig {
    SimConfig sim;
    LearningParams learning;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const char* ws = " \t\r\n";
    const std::size_t a = s.find_first_not_of(ws);
    if (a == std::string::npos) return "";
    const std::size_t b = s.find_last_not_of(ws);
    return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& section, const std::string& key,
                           const std::string& value) {
    try {
        std::size_t used = 0;
        const double x = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing text");
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("invalid value for " + section + "." + key +
                                    ": '" + value + "'");
    }
}

inline int parse_int(const std::string& section, const std::string& key,
                     const std::string& value) {
    try {
        std::size_t used = 0;
        const long long x = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing text");
        if (x < -2147483648LL || x > 2147483647LL) {
            throw std::out_of_range("int range");
        }
        return static_cast<int>(x);
    } catch (const std::exception&) {
        throw std::invalid_argument("invalid value for " + section + "." + key +
                                    ": '" + value + "'");
    }
}

}  // namespace detail

/// Parse the flat sectioned key=value configuration text. Unset keys keep
/// their defaults; unknown sections or keys are errors naming the key;
/// the resulting records are fully validated.
///
/// Grammar: lines of `key = value` grouped under `[sim]`, `[learning]`,
/// `[events]` headers; blank lines and lines starting with `#` or `;`
/// are ignored.
inline RunConfig parse_config(const std::string& text) {
    RunConfig out;
    std::string section;

    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        const std::string raw =
            eol == std::string::npos ? text.substr(pos) : text.substr(pos, eol - pos);
        pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
        line_no += 1;

        const std::string line = detail::trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;

        if (line.front() == '[') {
            if (line.back() != ']') {
                throw std::invalid_argument("config line " + std::to_string(line_no) +
                                            ": unterminated section header");
            }
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section != "sim" && section != "learning" && section != "events") {
                throw std::invalid_argument("unknown section: [" + section + "]");
            }
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (section.empty()) {
            throw std::invalid_argument("key outside any section: " + key);
        }
        if (key.empty()) {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": empty key");
        }

        if (section == "sim") {
            if (key == "lambda") {
                out.sim.lambda = detail::parse_double(section, key, value);
            } else if (key == "mu") {
                out.sim.mu = detail::parse_double(section, key, value);
            } else if (key == "n_robots") {
                out.sim.n_robots = detail::parse_int(section, key, value);
            } else if (key == "n_tasks") {
                out.sim.n_tasks_total = detail::parse_int(section, key, value);
            } else if (key == "horizon") {
                out.sim.episode_event_horizon = detail::parse_int(section, key, value);
            } else if (key == "task_duration") {
                out.sim.task_duration = detail::parse_double(section, key, value);
            } else if (key == "fail_service_multiplier") {
                out.sim.fail_service_multiplier =
                    detail::parse_double(section, key, value);
            } else if (key == "discipline") {
                if (value == "fifo") {
                    out.sim.discipline = Discipline::FIFO;
                } else if (value == "sjf") {
                    out.sim.discipline = Discipline::SJF;
                } else {
                    throw std::invalid_argument(
                        "invalid value for sim.discipline: '" + value +
                        "' (expected fifo or sjf)");
                }
            } else {
                throw std::invalid_argument("unknown key: sim." + key);
            }
        } else if (section == "learning") {
            if (key == "alpha") {
                out.learning.alpha = detail::parse_double(section, key, value);
            } else if (key == "gamma") {
                out.learning.gamma = detail::parse_double(section, key, value);
            } else if (key == "epsilon") {
                out.learning.epsilon = detail::parse_double(section, key, value);
            } else if (key == "r_s") {
                out.learning.r_s = detail::parse_double(section, key, value);
            } else if (key == "r_f") {
                out.learning.r_f = detail::parse_double(section, key, value);
            } else if (key == "r_t") {
                out.learning.r_t = detail::parse_double(section, key, value);
            } else if (key == "mu_bar_convention") {
                if (value == "time") {
                    out.learning.convention = MuBarConvention::Time;
                } else if (value == "rate") {
                    out.learning.convention = MuBarConvention::Rate;
                } else {
                    throw std::invalid_argument(
                        "invalid value for learning.mu_bar_convention: '" + value +
                        "' (expected time or rate)");
                }
            } else {
                throw std::invalid_argument("unknown key: learning." + key);
            }
        } else {  // events
            bool matched = false;
            for (std::size_t i = 0; i < out.sim.catalog.entries.size(); ++i) {
                const std::string suffix = "_e" + std::to_string(i + 1);
                if (key == "fail_prob" + suffix) {
                    out.sim.catalog.entries[i].fail_prob =
                        detail::parse_double(section, key, value);
                    matched = true;
                } else if (key == "mix" + suffix) {
                    out.sim.catalog.mix[i] = detail::parse_double(section, key, value);
                    matched = true;
                } else if (key == "service_multiplier" + suffix) {
                    out.sim.catalog.entries[i].service_multiplier =
                        detail::parse_double(section, key, value);
                    matched = true;
                }
                if (matched) break;
            }
            if (!matched) {
                throw std::invalid_argument("unknown key: events." + key);
            }
        }
    }

    out.sim.validate();
    out.learning.validate();
    // Reward terms follow the configured rates under the configured
    // convention; schedules and noise re-refresh these per episode.
    out.learning.refresh_rates(out.sim.lambda, out.sim.mu);
    out.learning.validate();
    return out;
}

namespace detail {

inline std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace detail

/// Canonical configuration text: parse_config(render_config(rc)) yields
/// rc back. Used for the manifest echo written next to run outputs.
inline std::string render_config(const RunConfig& rc) {
    std::string out;
    out += "[sim]\n";
    out += "lambda = " + detail::fmt17(rc.sim.lambda) + "\n";
    out += "mu = " + detail::fmt17(rc.sim.mu) + "\n";
    out += "n_robots = " + std::to_string(rc.sim.n_robots) + "\n";
    out += "n_tasks = " + std::to_string(rc.sim.n_tasks_total) + "\n";
    out += "horizon = " + std::to_string(rc.sim.episode_event_horizon) + "\n";
    out += "task_duration = " + detail::fmt17(rc.sim.task_duration) + "\n";
    out += "fail_service_multiplier = " +
           detail::fmt17(rc.sim.fail_service_multiplier) + "\n";
    out += std::string("discipline = ") + to_string(rc.sim.discipline) + "\n";
    out += "\n[learning]\n";
    out += "alpha = " + detail::fmt17(rc.learning.alpha) + "\n";
    out += "gamma = " + detail::fmt17(rc.learning.gamma) + "\n";
    out += "epsilon = " + detail::fmt17(rc.learning.epsilon) + "\n";
    out += "r_s = " + detail::fmt17(rc.learning.r_s) + "\n";
    out += "r_f = " + detail::fmt17(rc.learning.r_f) + "\n";
    out += "r_t = " + detail::fmt17(rc.learning.r_t) + "\n";
    out += std::string("mu_bar_convention = ") + to_string(rc.learning.convention) +
           "\n";
    out += "\n[events]\n";
    for (std::size_t i = 0; i < rc.sim.catalog.entries.size(); ++i) {
        const std::string suffix = "_e" + std::to_string(i + 1);
        out += "fail_prob" + suffix + " = " +
               detail::fmt17(rc.sim.catalog.entries[i].fail_prob) + "\n";
        out += "mix" + suffix + " = " + detail::fmt17(rc.sim.catalog.mix[i]) + "\n";
        out += "service_multiplier" + suffix + " = " +
               detail::fmt17(rc.sim.catalog.entries[i].service_multiplier) + "\n";
    }
    return out;
}

}  // namespace balksim
