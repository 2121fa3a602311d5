#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "clab/attractor.hpp"
#include "clab/pattern.hpp"
#include "clab/reservoir.hpp"
#include "clab/trainer.hpp"

namespace clab {

enum class ExperimentKind {
    periodic,
    chaotic,
    multichannel_csv,
    morph,
    online_adaptation,
    custom
};

enum class EmitKind {
    recall_csv,
    nrmse_table,
    singular_values,
    state_clouds,
    delay_embedding,
    mu_trace
};

std::string to_string(ExperimentKind kind);
std::string to_string(EmitKind kind);

/// Declarative description of one driver pattern.
struct PatternSpec {
    enum class Kind { sine, periodic_random, attractor, csv, synthetic };
    Kind kind = Kind::sine;
    std::string name;  // optional artifact label

    double period = 8.8342522;    // sine
    Index length = 5000;          // sine / periodic_random / attractor / synthetic
    Index int_period = 5;         // periodic_random
    std::uint64_t seed = 0;       // periodic_random / synthetic
    double perturbation = 0.0;    // periodic_random

    AttractorParams attractor;    // attractor

    std::filesystem::path path;   // csv
    bool normalize = false;
    Index smooth_window = 0;

    Index channels = 10;          // synthetic (mixed sines + transients)
    Index variant = 0;
};

Pattern realize(const PatternSpec& spec);
std::vector<Pattern> realize_patterns(const std::vector<PatternSpec>& specs);

/// Recall evaluation knobs. Zeros pick defaults: the harvested window length
/// for n_steps and an automatic shift bound for d_max. k_stability is the K
/// of the first/last-window long-term stability protocol.
struct RecallSpec {
    Index n_steps = 0;
    Index d_max = 0;
    Index k_stability = 200;
};

struct ExperimentConfig {
    std::string name;  // artifact prefix; defaults to the experiment kind
    ExperimentKind experiment = ExperimentKind::custom;
    ReservoirConfig reservoir;
    TrainingPlan plan;
    std::vector<PatternSpec> patterns;
    std::optional<MorphSpec> morph;
    std::filesystem::path outputs = "out";
    std::set<EmitKind> emit;
    RecallSpec recall;
    std::array<Index, 2> cloud_neurons{0, 1};
    Index embed_channel = 0;
    Index embed_delay = 1;
};

/// Parses the JSON experiment description; throws config_error on any
/// structural or semantic problem.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Executes the experiment: train, self-generate (and morph when
/// configured), evaluate, and write the requested CSV artifacts plus a
/// manifest into the output directory. Returns a process exit status:
/// 0 success, 2 config validation failure (nothing written), 3 training or
/// recall divergence, 4 I/O failure. Progress and errors go to `log`.
int run(const ExperimentConfig& config, std::ostream& log);

}  // namespace clab
