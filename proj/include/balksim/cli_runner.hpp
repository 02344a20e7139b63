#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "balksim/config.hpp"
#include "balksim/experiments.hpp"
#include "balksim/policy_io.hpp"
#include "balksim/trainer.hpp"

namespace balksim {

/// Fully resolved invocation of one CLI command.
struct RunManifest {
    std::string command;               // train | eval | reproduce
    std::string config_path;           // empty -> built-in defaults
    std::optional<Model> model;        // train (required), eval (cross-check)
    std::optional<int> episodes;       // train/reproduce override
    int runs = 30;                     // eval/reproduce test replications
    std::uint64_t seed = 1;            // master seed
    std::string out_dir = ".";
    int jobs = 1;
    double noise_level = 0.0;          // eval/train rate noise; 0 = off
    std::optional<MuBarConvention> convention;  // config override
    std::string policy_path;           // eval input
    std::string figure_id;             // reproduce target

    void validate() const {
        if (command != "train" && command != "eval" && command != "reproduce") {
            throw std::invalid_argument("unknown command: " + command);
        }
        if (command == "train" && !model.has_value()) {
            throw std::invalid_argument("train requires --model");
        }
        if (command == "eval" && policy_path.empty()) {
            throw std::invalid_argument("eval requires --policy");
        }
        if (command == "reproduce" && figure_id.empty()) {
            throw std::invalid_argument("reproduce requires a figure id");
        }
        if (episodes.has_value() && *episodes < 1) {
            throw std::invalid_argument("--episodes must be >= 1");
        }
        if (runs < 1) {
            throw std::invalid_argument("--runs must be >= 1");
        }
        if (jobs < 1) {
            throw std::invalid_argument("--jobs must be >= 1");
        }
        if (noise_level < 0.0 || noise_level > 0.9) {
            throw std::invalid_argument("--noise-level must lie in [0, 0.9]");
        }
    }
};

namespace detail {

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace detail

/// Config file resolution: file contents (or defaults) plus command-line
/// overrides that take precedence over the file.
inline RunConfig resolve_config(const RunManifest& manifest) {
    RunConfig rc = manifest.config_path.empty()
                       ? parse_config("")
                       : parse_config(detail::read_text_file(manifest.config_path));
    if (manifest.convention.has_value()) {
        rc.learning.convention = *manifest.convention;
        rc.learning.refresh_rates(rc.sim.lambda, rc.sim.mu);
    }
    return rc;
}

/// The echo written next to every run's outputs: the invocation as
/// comments, then the resolved config in the canonical grammar, so the
/// file both documents the run and re-runs it bit-identically.
inline void write_manifest_echo(const std::string& path,
                                const RunManifest& manifest,
                                const RunConfig& rc) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    out << "# balksim run manifest\n";
    out << "# command = " << manifest.command << '\n';
    if (manifest.model.has_value()) {
        out << "# model = " << to_string(*manifest.model) << '\n';
    }
    if (manifest.episodes.has_value()) {
        out << "# episodes = " << *manifest.episodes << '\n';
    }
    if (manifest.command != "train") {
        out << "# runs = " << manifest.runs << '\n';
    }
    out << "# seed = " << manifest.seed << '\n';
    out << "# jobs = " << manifest.jobs << '\n';
    out << "# noise_level = " << fmt6(manifest.noise_level) << '\n';
    if (!manifest.policy_path.empty()) {
        out << "# policy = " << manifest.policy_path << '\n';
    }
    if (!manifest.figure_id.empty()) {
        out << "# figure = " << manifest.figure_id << '\n';
    }
    out << '\n' << render_config(rc);
}

inline std::optional<NoiseSpec> noise_from_level(double level) {
    if (level <= 0.0) return std::nullopt;
    return NoiseSpec{level, true, true};
}

inline int cmd_train(const RunManifest& manifest, const RunConfig& rc,
                     std::ostream& log) {
    const int episodes = manifest.episodes.value_or(2000);
    TrainOptions options;
    options.noise = noise_from_level(manifest.noise_level);
    const TrainResult result = train(rc.sim, *manifest.model, rc.learning,
                                     episodes, manifest.seed, options);

    const std::string curve_path = manifest.out_dir + "/learning_curve.csv";
    const std::string policy_path = manifest.out_dir + "/policy.txt";
    write_learning_curve(curve_path, result.curve);
    write_policies(policy_path, result.model, result.tables);
    log << "trained " << to_string(result.model) << " for " << episodes
        << " episodes\n";
    log << "wrote " << curve_path << '\n';
    log << "wrote " << policy_path << '\n';
    return 0;
}

inline int cmd_eval(const RunManifest& manifest, const RunConfig& rc,
                    std::ostream& log) {
    const PolicyBundle bundle = read_policies(manifest.policy_path);
    if (manifest.model.has_value() && *manifest.model != bundle.model) {
        throw std::invalid_argument(
            std::string("--model ") + to_string(*manifest.model) +
            " does not match policy file model " + to_string(bundle.model));
    }
    if (bundle.model != Model::TL &&
        static_cast<int>(bundle.tables.size()) != rc.sim.n_robots) {
        throw std::invalid_argument(
            "policy file has " + std::to_string(bundle.tables.size()) +
            " robot tables but config sets n_robots = " +
            std::to_string(rc.sim.n_robots));
    }

    GreedyTablePolicy policy(bundle.model, bundle.tables);
    const std::vector<PolicySpec> specs = {
        {to_string(bundle.model), &policy, rc.sim.discipline}};
    TestOptions options;
    options.jobs = manifest.jobs;
    options.noise = noise_from_level(manifest.noise_level);
    const std::vector<PolicyStats> rows = run_test_phase(
        specs, rc.sim, rc.learning, manifest.runs, manifest.seed, options);

    const std::string summary_path = manifest.out_dir + "/test_summary.csv";
    write_test_summary(summary_path, rows);
    log << "evaluated " << to_string(bundle.model) << " over " << manifest.runs
        << " runs\n";
    log << "wrote " << summary_path << '\n';
    return 0;
}

inline int cmd_reproduce(const RunManifest& manifest, const RunConfig& rc,
                         std::ostream& log) {
    ReproduceOptions options;
    if (manifest.episodes.has_value()) {
        options.train_episodes = *manifest.episodes;
    }
    options.test_runs = manifest.runs;
    options.jobs = manifest.jobs;
    const std::vector<std::string> written = reproduce_figure(
        manifest.figure_id, manifest.out_dir, manifest.seed, rc.sim,
        rc.learning, options);
    for (const std::string& path : written) {
        log << "wrote " << path << '\n';
    }
    return 0;
}

/// Dispatch a validated manifest: resolve config, run the command, write
/// the manifest echo. Returns the process exit status; errors print one
/// diagnostic line and return nonzero.
inline int cmd_run(const RunManifest& manifest, std::ostream& log = std::cout,
                   std::ostream& err = std::cerr) {
    try {
        manifest.validate();
        const RunConfig rc = resolve_config(manifest);
        std::filesystem::create_directories(manifest.out_dir);
        int status = 0;
        if (manifest.command == "train") {
            status = cmd_train(manifest, rc, log);
        } else if (manifest.command == "eval") {
            status = cmd_eval(manifest, rc, log);
        } else {
            status = cmd_reproduce(manifest, rc, log);
        }
        write_manifest_echo(manifest.out_dir + "/manifest.txt", manifest, rc);
        return status;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace balksim
