#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "balksim/qtable.hpp"
#include "balksim/state.hpp"

namespace balksim {

/// A frozen policy on disk: the model kind plus its table set (one table
/// for TL, one per robot otherwise).
struct PolicyBundle {
    Model model = Model::IL_O;
    std::vector<QTable> tables;
};

namespace detail {

inline std::string fmt9(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

}  // namespace detail

/// Line-oriented policy serialization. A header line carries the model
/// tag and table count; each record line is
///   <model> <owner> <state-key> <q_join> <q_balk>
/// with values at 9 significant digits, sorted by (owner, key) so files
/// diff cleanly. The owner column identifies the robot a table belongs
/// to (always 0 for the single TL table).
inline void write_policies(const std::string& path, Model model,
                           const std::vector<QTable>& tables) {
    if (tables.empty()) {
        throw std::invalid_argument("write_policies: no tables");
    }
    if (model == Model::TL && tables.size() != 1) {
        throw std::invalid_argument("write_policies: TL takes exactly one table");
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    out << "balksim-policy v1 model=" << to_string(model)
        << " owners=" << tables.size() << '\n';
    for (std::size_t owner = 0; owner < tables.size(); ++owner) {
        std::vector<std::pair<StateKey, ActionValues>> records(
            tables[owner].begin(), tables[owner].end());
        std::sort(records.begin(), records.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [key, values] : records) {
            out << to_string(model) << ' ' << owner << ' '
                << state_key_to_string(key) << ' ' << detail::fmt9(values.q_join)
                << ' ' << detail::fmt9(values.q_balk) << '\n';
        }
    }
    if (!out) {
        throw std::runtime_error("write failed: " + path);
    }
}

inline PolicyBundle read_policies(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open policy file: " + path);
    }
    std::string header;
    if (!std::getline(in, header)) {
        throw std::runtime_error(path + ": empty policy file");
    }
    std::istringstream hs(header);
    std::string magic, version, model_field, owners_field;
    if (!(hs >> magic >> version >> model_field >> owners_field) ||
        magic != "balksim-policy" || version != "v1" ||
        model_field.rfind("model=", 0) != 0 ||
        owners_field.rfind("owners=", 0) != 0) {
        throw std::runtime_error(path + ": bad policy header");
    }
    PolicyBundle bundle;
    bundle.model = model_from_string(model_field.substr(6));
    int owners = 0;
    try {
        owners = std::stoi(owners_field.substr(7));
    } catch (const std::exception&) {
        throw std::runtime_error(path + ": bad owner count");
    }
    if (owners < 1 || (bundle.model == Model::TL && owners != 1)) {
        throw std::runtime_error(path + ": bad owner count");
    }
    bundle.tables.resize(static_cast<std::size_t>(owners));

    std::string line;
    int line_no = 1;
    while (std::getline(in, line)) {
        line_no += 1;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string model_tag, key_text, join_text, balk_text;
        int owner = -1;
        if (!(ls >> model_tag >> owner >> key_text >> join_text >> balk_text)) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": malformed record");
        }
        std::string extra;
        if (ls >> extra) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": trailing fields");
        }
        if (model_from_string(model_tag) != bundle.model) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": record model differs from header");
        }
        if (owner < 0 || owner >= owners) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": owner out of range");
        }
        double q_join = 0.0;
        double q_balk = 0.0;
        try {
            std::size_t used = 0;
            q_join = std::stod(join_text, &used);
            if (used != join_text.size()) throw std::invalid_argument("");
            q_balk = std::stod(balk_text, &used);
            if (used != balk_text.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": bad q value");
        }
        StateKey key;
        try {
            key = state_key_from_string(bundle.model, key_text);
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": " + e.what());
        }
        QTable& table = bundle.tables[static_cast<std::size_t>(owner)];
        const std::size_t before = table.size();
        ActionValues& slot = table.slot(key);
        if (table.size() == before) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": duplicate state key");
        }
        slot.q_join = q_join;
        slot.q_balk = q_balk;
    }
    return bundle;
}

}  // namespace balksim
