#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "clab/experiment.hpp"
#include "clab/presets.hpp"

using namespace clab;

namespace {

namespace fs = std::filesystem;
const fs::path tmp = fs::temp_directory_path();

ExperimentConfig tiny_experiment(const fs::path& out) {
    ExperimentConfig cfg;
    cfg.name = "tiny";
    cfg.experiment = ExperimentKind::custom;
    cfg.reservoir.n_neurons = 30;
    cfg.reservoir.n_inputs = 1;
    cfg.reservoir.bias_scaling = 0.2;
    cfg.reservoir.seed = 11;
    cfg.plan.mode = TrainingMode::conceptor;
    cfg.plan.n_washout = 50;
    cfg.plan.apertures = {50.0};
    cfg.plan.ridge = {0.001, 0.0};
    PatternSpec sine;
    sine.kind = PatternSpec::Kind::sine;
    sine.period = 8.83;
    sine.length = 400;
    PatternSpec rnd;
    rnd.kind = PatternSpec::Kind::periodic_random;
    rnd.int_period = 5;
    rnd.length = 400;
    rnd.seed = 13;
    cfg.patterns = {sine, rnd};
    cfg.outputs = out;
    cfg.emit = {EmitKind::recall_csv, EmitKind::nrmse_table, EmitKind::singular_values,
                EmitKind::state_clouds};
    return cfg;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("presets: names resolve, unknown names do not") {
    const auto names = preset_names();
    CHECK(names.size() >= 8);
    for (const auto& name : names) CHECK_NOTHROW(make_preset(name));
    CHECK_THROWS_AS(make_preset("no-such-preset"), config_error);
}

TEST_CASE("realize_patterns covers all generator kinds") {
    auto specs = make_preset("periodic-conceptor").patterns;
    auto patterns = realize_patterns(specs);
    REQUIRE(patterns.size() == 4);
    CHECK(patterns[0].length() == 5000);
    CHECK(patterns[2].channels() == 1);

    PatternSpec synth;
    synth.kind = PatternSpec::Kind::synthetic;
    synth.channels = 10;
    synth.length = 300;
    synth.seed = 2;
    const Pattern p = realize(synth);
    CHECK(p.channels() == 10);
    CHECK(p.length() == 300);
    CHECK(p.data.cwiseAbs().maxCoeff() <= 0.95 + 1e-12);
}

TEST_CASE("config JSON parsing round-trips the essentials") {
    const auto path = tmp / "clab_config.json";
    std::ofstream(path) << R"({
      "name": "demo",
      "experiment": "periodic",
      "reservoir": {"n_neurons": 40, "n_inputs": 1, "bias_scaling": 0.2, "seed": 9},
      "plan": {"mode": "diagonal_explicit", "n_washout": 60, "n_stage1": 100,
               "apertures": [8.0, 9.0], "rho_w": 0.001, "rho_wout": 0, "seed": 4},
      "patterns": [
        {"type": "sine", "period": 8.83, "length": 500},
        {"type": "periodic_random", "period": 5, "length": 500, "seed": 3}
      ],
      "emit": ["recall_csv", "nrmse_table"],
      "recall": {"k_stability": 100},
      "outputs": "somewhere"
    })";
    const ExperimentConfig cfg = load_experiment_config(path);
    CHECK(cfg.name == "demo");
    CHECK(cfg.experiment == ExperimentKind::periodic);
    CHECK(cfg.reservoir.n_neurons == 40);
    CHECK(cfg.plan.mode == TrainingMode::diagonal_explicit);
    CHECK(cfg.plan.n_stage1 == 100);
    CHECK(cfg.plan.apertures == std::vector<double>{8.0, 9.0});
    CHECK(cfg.patterns.size() == 2);
    CHECK(cfg.patterns[1].int_period == 5);
    CHECK(cfg.emit.count(EmitKind::recall_csv) == 1);
    CHECK(cfg.recall.k_stability == 100);
    CHECK(cfg.outputs == fs::path("somewhere"));
}

TEST_CASE("config errors: malformed JSON, missing sections, unknown enums") {
    const auto path = tmp / "clab_bad_config.json";
    std::ofstream(path) << "{ not json";
    CHECK_THROWS_AS(load_experiment_config(path), config_error);
    std::ofstream(path) << R"({"experiment": "periodic"})";
    CHECK_THROWS_AS(load_experiment_config(path), config_error);
    std::ofstream(path) << R"({
      "experiment": "nope",
      "reservoir": {"n_neurons": 4, "n_inputs": 1},
      "plan": {"mode": "conceptor", "n_washout": 1, "apertures": [1]},
      "patterns": [{"type": "sine", "period": 8.0, "length": 50}]
    })";
    CHECK_THROWS_AS(load_experiment_config(path), config_error);
    CHECK_THROWS_AS(load_experiment_config(tmp / "clab_missing.json"), config_error);
}

TEST_CASE("run: missing pattern file exits 2 and writes nothing") {
    const auto out = tmp / "clab_run_missing";
    fs::remove_all(out);
    ExperimentConfig cfg = tiny_experiment(out);
    PatternSpec csv;
    csv.kind = PatternSpec::Kind::csv;
    csv.path = tmp / "clab_not_there.csv";
    cfg.patterns.push_back(csv);
    std::ostringstream log;
    CHECK(run(cfg, log) == 2);
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("run: bad reservoir config exits 2") {
    const auto out = tmp / "clab_run_bad";
    fs::remove_all(out);
    ExperimentConfig cfg = tiny_experiment(out);
    cfg.reservoir.leaking_rate = 7.0;
    std::ostringstream log;
    CHECK(run(cfg, log) == 2);
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("run: unwritable output directory exits 4") {
    ExperimentConfig cfg = tiny_experiment("/proc/clab_cannot_write/out");
    std::ostringstream log;
    CHECK(run(cfg, log) == 4);
}

TEST_CASE("run: tiny experiment writes the requested artifacts deterministically") {
    const auto out_a = tmp / "clab_run_a";
    const auto out_b = tmp / "clab_run_b";
    fs::remove_all(out_a);
    fs::remove_all(out_b);

    std::ostringstream log;
    ExperimentConfig cfg = tiny_experiment(out_a);
    REQUIRE(run(cfg, log) == 0);
    cfg.outputs = out_b;
    REQUIRE(run(cfg, log) == 0);

    const std::vector<std::string> expected = {
        "tiny_p0_recall.csv",         "tiny_p1_recall.csv",
        "tiny_nrmse.csv",             "tiny_nrmse_table.csv",
        "tiny_p0_singular_values.csv", "tiny_p1_singular_values.csv",
        "tiny_p0_state_cloud.csv",    "tiny_p1_state_cloud.csv",
        "tiny_manifest.json"};
    for (const auto& name : expected) {
        CAPTURE(name);
        REQUIRE(fs::exists(out_a / name));
        REQUIRE(fs::exists(out_b / name));
        CHECK(slurp(out_a / name) == slurp(out_b / name));
    }
}

TEST_CASE("run: morph experiment emits output and mu trace") {
    const auto out = tmp / "clab_run_morph";
    fs::remove_all(out);
    ExperimentConfig cfg = tiny_experiment(out);
    cfg.experiment = ExperimentKind::morph;
    MorphSpec spec;
    spec.idx1 = 0;
    spec.idx2 = 1;
    spec.mu_min = 0.0;
    spec.mu_max = 1.0;
    spec.n_pre = 30;
    spec.n_morph = 40;
    spec.n_post = 30;
    cfg.morph = spec;
    cfg.emit.insert(EmitKind::mu_trace);
    std::ostringstream log;
    REQUIRE(run(cfg, log) == 0);
    CHECK(fs::exists(out / "tiny_morph_output.csv"));
    CHECK(fs::exists(out / "tiny_morph_mu.csv"));

    // the mu trace has one row per step plus a header
    std::ifstream mu(out / "tiny_morph_mu.csv");
    std::string line;
    Index rows = 0;
    while (std::getline(mu, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 1 + 100);
}

TEST_CASE("run: morph experiment without a morph section exits 2") {
    const auto out = tmp / "clab_run_morph_bad";
    fs::remove_all(out);
    ExperimentConfig cfg = tiny_experiment(out);
    cfg.experiment = ExperimentKind::morph;
    std::ostringstream log;
    CHECK(run(cfg, log) == 2);
    CHECK_FALSE(fs::exists(out));
}

}  // TEST_SUITE
