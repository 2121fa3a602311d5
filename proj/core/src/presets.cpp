#include "clab/presets.hpp"

#include <cmath>

#include "clab/rng.hpp"

namespace clab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Periods of the two irrational-periodic sine drivers.
constexpr double kSinePeriodA = 8.8342522;
constexpr double kSinePeriodB = 9.8342522;

std::vector<PatternSpec> periodic_patterns() {
    PatternSpec sine1;
    sine1.kind = PatternSpec::Kind::sine;
    sine1.name = "sine-8.83";
    sine1.period = kSinePeriodA;
    sine1.length = 5000;

    PatternSpec sine2 = sine1;
    sine2.name = "sine-9.83";
    sine2.period = kSinePeriodB;

    PatternSpec random1;
    random1.kind = PatternSpec::Kind::periodic_random;
    random1.name = "random-5p";
    random1.int_period = 5;
    random1.length = 5000;
    random1.seed = 101;

    PatternSpec random2 = random1;
    random2.name = "random-5p-var";
    random2.perturbation = 0.1;

    return {sine1, sine2, random1, random2};
}

std::vector<PatternSpec> chaotic_patterns() {
    std::vector<PatternSpec> specs;
    for (const auto system : {AttractorSystem::rossler, AttractorSystem::lorenz,
                              AttractorSystem::mackey_glass, AttractorSystem::henon}) {
        PatternSpec spec;
        spec.kind = PatternSpec::Kind::attractor;
        spec.name = to_string(system);
        spec.attractor = AttractorParams::defaults(system);
        spec.length = 1500;
        specs.push_back(spec);
    }
    return specs;
}

ReservoirConfig periodic_reservoir() {
    ReservoirConfig cfg;
    cfg.n_neurons = 100;
    cfg.n_inputs = 1;
    cfg.w_star_scaling = 1.0;
    cfg.w_in_scaling = 1.0;
    cfg.bias_scaling = 0.2;
    cfg.leaking_rate = 1.0;
    cfg.seed = 12;
    return cfg;
}

ReservoirConfig chaotic_reservoir() {
    ReservoirConfig cfg;
    cfg.n_neurons = 500;
    cfg.n_inputs = 2;
    cfg.w_star_scaling = 1.5;
    cfg.w_in_scaling = 1.5;
    cfg.bias_scaling = 1.0;
    cfg.leaking_rate = 1.0;
    cfg.seed = 3;
    return cfg;
}

ExperimentConfig periodic_conceptor() {
    ExperimentConfig cfg;
    cfg.name = "periodic-conceptor";
    cfg.experiment = ExperimentKind::periodic;
    cfg.reservoir = periodic_reservoir();
    cfg.patterns = periodic_patterns();
    cfg.plan.mode = TrainingMode::conceptor;
    cfg.plan.n_washout = 200;
    cfg.plan.apertures = {100.0};
    cfg.plan.ridge = {0.001, 0.0};
    cfg.plan.seed = 1202;
    cfg.emit = {EmitKind::recall_csv, EmitKind::nrmse_table, EmitKind::singular_values};
    return cfg;
}

ExperimentConfig periodic_diagonal() {
    ExperimentConfig cfg = periodic_conceptor();
    cfg.name = "periodic-diagonal";
    cfg.plan.mode = TrainingMode::diagonal_explicit;
    cfg.plan.n_stage1 = 500;
    cfg.plan.apertures = {8.0};
    cfg.emit.insert(EmitKind::state_clouds);
    return cfg;
}

ExperimentConfig online_adaptation() {
    ExperimentConfig cfg = periodic_diagonal();
    cfg.name = "online-adaptation";
    cfg.experiment = ExperimentKind::online_adaptation;
    cfg.plan.mode = TrainingMode::diagonal_iterative;
    cfg.plan.n_stage1 = 3000;
    cfg.plan.rate = 0.5;
    cfg.emit = {EmitKind::recall_csv, EmitKind::nrmse_table, EmitKind::state_clouds};
    return cfg;
}

ExperimentConfig chaotic_conceptor() {
    ExperimentConfig cfg;
    cfg.name = "chaotic-conceptor";
    cfg.experiment = ExperimentKind::chaotic;
    cfg.reservoir = chaotic_reservoir();
    cfg.patterns = chaotic_patterns();
    cfg.plan.mode = TrainingMode::conceptor;
    cfg.plan.n_washout = 100;
    cfg.plan.apertures = {140.0, 50.0, 140.0, 20.0};
    cfg.plan.ridge = {0.1, 0.0};
    cfg.plan.seed = 2;
    cfg.emit = {EmitKind::recall_csv, EmitKind::nrmse_table, EmitKind::singular_values,
                EmitKind::delay_embedding};
    return cfg;
}

ExperimentConfig chaotic_diagonal() {
    ExperimentConfig cfg = chaotic_conceptor();
    cfg.name = "chaotic-diagonal";
    cfg.plan.mode = TrainingMode::diagonal_explicit;
    cfg.plan.n_stage1 = 400;
    cfg.plan.apertures = {10.0, 6.0, 9.0, 5.0};
    cfg.plan.ridge = {0.01, 0.0};
    cfg.plan.seed = 3002;
    return cfg;
}

ExperimentConfig morph_periodic_conceptor() {
    ExperimentConfig cfg = periodic_conceptor();
    cfg.name = "morph-periodic-conceptor";
    cfg.experiment = ExperimentKind::morph;
    MorphSpec spec;
    spec.idx1 = 0;
    spec.idx2 = 1;
    spec.mu_min = -2.0;
    spec.mu_max = 3.0;
    spec.n_pre = 150;
    spec.n_morph = 200;
    spec.n_post = 50;
    cfg.morph = spec;
    cfg.emit = {EmitKind::recall_csv, EmitKind::nrmse_table, EmitKind::mu_trace};
    return cfg;
}

ExperimentConfig morph_periodic_diagonal() {
    ExperimentConfig cfg = periodic_diagonal();
    cfg.name = "morph-periodic-diagonal";
    cfg.experiment = ExperimentKind::morph;
    MorphSpec spec;
    spec.idx1 = 0;
    spec.idx2 = 1;
    spec.mu_min = 0.0;
    spec.mu_max = 1.0;
    spec.n_pre = 150;
    spec.n_morph = 200;
    spec.n_post = 50;
    cfg.morph = spec;
    cfg.emit = {EmitKind::recall_csv, EmitKind::nrmse_table, EmitKind::mu_trace};
    return cfg;
}

ExperimentConfig multichannel_synthetic() {
    ExperimentConfig cfg;
    cfg.name = "multichannel-synthetic";
    cfg.experiment = ExperimentKind::custom;
    cfg.reservoir.n_neurons = 800;
    cfg.reservoir.n_inputs = 10;
    cfg.reservoir.w_star_scaling = 1.0;
    cfg.reservoir.w_in_scaling = 0.2;
    cfg.reservoir.bias_scaling = 0.2;
    cfg.reservoir.leaking_rate = 0.15;
    cfg.reservoir.seed = 6;
    for (Index variant = 0; variant < 3; ++variant) {
        PatternSpec spec;
        spec.kind = PatternSpec::Kind::synthetic;
        spec.name = "mixed-" + std::to_string(variant);
        spec.channels = 10;
        spec.length = 600;
        spec.seed = 41;
        spec.variant = variant;
        cfg.patterns.push_back(spec);
    }
    cfg.plan.mode = TrainingMode::diagonal_explicit;
    cfg.plan.n_washout = 50;
    cfg.plan.n_stage1 = 200;
    cfg.plan.apertures = {35.0};
    cfg.plan.ridge = {0.02, 0.01};
    cfg.plan.seed = 9;
    cfg.emit = {EmitKind::recall_csv, EmitKind::nrmse_table};
    return cfg;
}

ExperimentConfig human_motion(bool diagonal) {
    ExperimentConfig cfg;
    cfg.name = diagonal ? "human-motion-diagonal" : "human-motion-conceptor";
    cfg.experiment = ExperimentKind::multichannel_csv;
    cfg.reservoir.n_inputs = 61;
    cfg.reservoir.w_star_scaling = 1.0;
    cfg.reservoir.seed = 1;
    for (int j = 1; j <= 15; ++j) {
        PatternSpec spec;
        spec.kind = PatternSpec::Kind::csv;
        char name[32];
        std::snprintf(name, sizeof(name), "motion_%02d", j);
        spec.name = name;
        spec.path = std::filesystem::path("mocap_csv") / (std::string(name) + ".csv");
        spec.normalize = true;
        spec.smooth_window = 5;
        cfg.patterns.push_back(spec);
    }
    cfg.plan.n_washout = 50;
    cfg.plan.seed = 2;
    if (diagonal) {
        cfg.reservoir.n_neurons = 1000;
        cfg.reservoir.w_in_scaling = 0.1;
        cfg.reservoir.bias_scaling = 0.1;
        cfg.reservoir.leaking_rate = 0.15;
        cfg.plan.mode = TrainingMode::diagonal_explicit;
        cfg.plan.stage1_fraction = 1.0 / 3.0;
        cfg.plan.n_stage1_per_pattern =
            {-1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, 400};
        cfg.plan.apertures = {8, 8, 20, 8, 35, 35, 35, 8, 35, 35, 35, 35, 30, 35, 8};
        cfg.plan.ridge = {0.05, 0.1};
    } else {
        cfg.reservoir.n_neurons = 600;
        cfg.reservoir.w_in_scaling = 0.2;
        cfg.reservoir.bias_scaling = 0.8;
        cfg.reservoir.leaking_rate = 0.3;
        cfg.plan.mode = TrainingMode::conceptor;
        cfg.plan.apertures = {25, 55, 17, 49, 89, 49, 9, 65, 49, 9, 25, 25, 17, 9, 7};
        cfg.plan.ridge = {0.001, 0.0};
    }
    cfg.emit = {EmitKind::recall_csv, EmitKind::nrmse_table};
    return cfg;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"periodic-conceptor",      "periodic-diagonal",
            "online-adaptation",       "chaotic-conceptor",
            "chaotic-diagonal",        "morph-periodic-conceptor",
            "morph-periodic-diagonal", "multichannel-synthetic",
            "human-motion-conceptor",  "human-motion-diagonal"};
}

ExperimentConfig make_preset(const std::string& name) {
    if (name == "periodic-conceptor") return periodic_conceptor();
    if (name == "periodic-diagonal") return periodic_diagonal();
    if (name == "online-adaptation") return online_adaptation();
    if (name == "chaotic-conceptor") return chaotic_conceptor();
    if (name == "chaotic-diagonal") return chaotic_diagonal();
    if (name == "morph-periodic-conceptor") return morph_periodic_conceptor();
    if (name == "morph-periodic-diagonal") return morph_periodic_diagonal();
    if (name == "multichannel-synthetic") return multichannel_synthetic();
    if (name == "human-motion-conceptor") return human_motion(false);
    if (name == "human-motion-diagonal") return human_motion(true);
    throw config_error("unknown preset '" + name + "'; run `conceptor-lab presets`");
}

Pattern gen_mixed_multichannel(Index channels, Index length, std::uint64_t seed,
                               Index variant) {
    if (channels < 1 || length < 1)
        throw std::invalid_argument("gen_mixed_multichannel: channels and length must be >= 1");
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(variant)));
    const double len = static_cast<double>(length);

    // Channels are random mixtures of a few shared latent components (two
    // tones, a sigmoid level shift and a one-off Gaussian excursion), the
    // way multi-marker motion channels share a few underlying degrees of
    // freedom.
    const double period1 = rng.uniform(18.0, 30.0);
    const double phase1 = rng.uniform(0.0, 2.0 * kPi);
    const double period2 = rng.uniform(40.0, 70.0);
    const double phase2 = rng.uniform(0.0, 2.0 * kPi);
    const double step_center = rng.uniform(0.3, 0.7) * len;
    const double step_width = rng.uniform(0.04, 0.1) * len;
    const double bump_center = rng.uniform(0.25, 0.75) * len;
    const double bump_width = rng.uniform(0.04, 0.1) * len;

    Matrix latents(length, 4);
    for (Index n = 0; n < length; ++n) {
        const double t = static_cast<double>(n);
        latents(n, 0) = std::sin(2.0 * kPi * t / period1 + phase1);
        latents(n, 1) = std::sin(2.0 * kPi * t / period2 + phase2);
        latents(n, 2) = 2.0 / (1.0 + std::exp(-(t - step_center) / step_width)) - 1.0;
        const double d = (t - bump_center) / bump_width;
        latents(n, 3) = std::exp(-0.5 * d * d);
    }

    Matrix data(length, channels);
    for (Index c = 0; c < channels; ++c) {
        Vector w(4);
        for (Index k = 0; k < 4; ++k) w(k) = rng.uniform(-1.0, 1.0);
        // Keep every channel dominated by the tonal components.
        const double tonal = std::abs(w(0)) + std::abs(w(1));
        if (tonal < 0.5) w(0) += w(0) >= 0.0 ? 0.5 : -0.5;
        data.col(c) = latents * w;
        const double peak = data.col(c).cwiseAbs().maxCoeff();
        if (peak > 0.95) data.col(c) *= 0.95 / peak;
    }
    return Pattern{"mixed-" + std::to_string(variant), std::move(data)};
}

}  // namespace clab
