// Experiment runner: trains a reservoir with (diagonal) conceptors from a
// preset or a JSON config and writes CSV artifacts for plots and tables.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <string>

#include "clab/experiment.hpp"
#include "clab/presets.hpp"
#include "clab/rng.hpp"

namespace {

/// Null stream for quiet mode.
struct NullBuffer : std::streambuf {
    int overflow(int c) override { return c; }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"conceptor-lab: store, recall and morph temporal patterns in a "
                 "recurrent network"};
    app.require_subcommand(1);

    std::string config_path;
    std::string preset_name;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_given = false;

    auto* run_cmd = app.add_subcommand("run", "Run one experiment");
    auto* config_opt = run_cmd->add_option("--config", config_path, "JSON experiment config");
    auto* preset_opt = run_cmd->add_option("--preset", preset_name, "Built-in preset name");
    config_opt->excludes(preset_opt);
    run_cmd->add_option("--seed", seed, "Override the reservoir and plan seeds")
        ->each([&](const std::string&) { seed_given = true; });
    run_cmd->add_option("--out", out_dir, "Output directory for artifacts");

    auto* presets_cmd = app.add_subcommand("presets", "List built-in presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (presets_cmd->parsed()) {
        for (const auto& name : clab::preset_names()) std::cout << name << '\n';
        return 0;
    }

    // Verbosity: CONCEPTOR_LAB_LOG=quiet silences progress output.
    NullBuffer null_buffer;
    std::ostream null_stream(&null_buffer);
    const char* log_env = std::getenv("CONCEPTOR_LAB_LOG");
    std::ostream& log = (log_env && std::string(log_env) == "quiet") ? null_stream : std::cerr;

    try {
        clab::ExperimentConfig config;
        if (!preset_name.empty())
            config = clab::make_preset(preset_name);
        else if (!config_path.empty())
            config = clab::load_experiment_config(config_path);
        else {
            std::cerr << "run: either --config or --preset is required\n";
            return 2;
        }
        if (seed_given) {
            config.reservoir.seed = clab::derive_seed(seed, 0);
            config.plan.seed = clab::derive_seed(seed, 1);
            for (auto& spec : config.patterns)
                if (spec.kind == clab::PatternSpec::Kind::periodic_random
                    || spec.kind == clab::PatternSpec::Kind::synthetic)
                    spec.seed = clab::derive_seed(seed, 2);
        }
        if (!out_dir.empty()) config.outputs = out_dir;
        return clab::run(config, log);
    } catch (const clab::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
