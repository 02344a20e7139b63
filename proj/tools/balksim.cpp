// Command-line front end: train a balking policy, evaluate a saved one,
// or regenerate the benchmark figure data.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

#include "balksim/balksim.hpp"

namespace {

void add_common_flags(CLI::App* cmd, balksim::RunManifest& manifest) {
    cmd->add_option("--config", manifest.config_path,
                    "Configuration file ([sim]/[learning]/[events] sections)");
    cmd->add_option("--seed", manifest.seed, "Master seed (64-bit)")
        ->capture_default_str();
    cmd->add_option("--out", manifest.out_dir, "Output directory")
        ->capture_default_str();
    cmd->add_option("--jobs", manifest.jobs, "Max concurrent replications")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option_function<std::string>(
           "--mu-bar-convention",
           [&manifest](const std::string& value) {
               manifest.convention = value == "time"
                                         ? balksim::MuBarConvention::Time
                                         : balksim::MuBarConvention::Rate;
           },
           "Mean-service term units in rewards")
        ->check(CLI::IsMember({"time", "rate"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Operator-attention balking queue simulator and learner"};
    app.require_subcommand(1);

    balksim::RunManifest manifest;
    std::string model_text;
    std::string figure_id;
    int episodes = 0;

    CLI::App* train = app.add_subcommand("train", "Learn a balking policy");
    add_common_flags(train, manifest);
    train->add_option("--model", model_text, "State model")
        ->check(CLI::IsMember({"tl", "il-u", "il-o"}))
        ->required();
    train->add_option("--episodes", episodes, "Training episodes (default 2000)")
        ->check(CLI::PositiveNumber);
    train->add_option("--noise-level", manifest.noise_level,
                      "Per-episode uniform rate noise in [0, 0.9]");

    CLI::App* eval = app.add_subcommand("eval", "Evaluate a saved policy");
    add_common_flags(eval, manifest);
    eval->add_option("--policy", manifest.policy_path, "Policy file from train")
        ->required();
    eval->add_option("--model", model_text, "Cross-check the policy file model")
        ->check(CLI::IsMember({"tl", "il-u", "il-o"}));
    eval->add_option("--runs", manifest.runs, "Test replications")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    eval->add_option("--noise-level", manifest.noise_level,
                     "Per-run uniform rate noise in [0, 0.9]");

    CLI::App* reproduce =
        app.add_subcommand("reproduce", "Regenerate benchmark figure data");
    add_common_flags(reproduce, manifest);
    reproduce
        ->add_option("figure", figure_id,
                     "One of: fig2 fig3 fig4 fig5a fig5b fig5c fig6 fig7")
        ->required();
    reproduce->add_option("--episodes", episodes, "Training episodes per scenario")
        ->check(CLI::PositiveNumber);
    reproduce->add_option("--runs", manifest.runs, "Test replications")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (train->parsed()) {
        manifest.command = "train";
    } else if (eval->parsed()) {
        manifest.command = "eval";
    } else {
        manifest.command = "reproduce";
        manifest.figure_id = figure_id;
    }
    if (!model_text.empty()) {
        manifest.model = balksim::model_from_string(model_text);
    }
    if (episodes > 0) {
        manifest.episodes = episodes;
    }

    return balksim::cmd_run(manifest);
}
