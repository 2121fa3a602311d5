#include "clab/experiment.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <vector>

#include <nlohmann/json.hpp>

#include "clab/evaluation.hpp"
#include "clab/presets.hpp"
#include "clab/serialization.hpp"

namespace clab {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// enum <-> string

ExperimentKind experiment_from_string(const std::string& s) {
    if (s == "periodic") return ExperimentKind::periodic;
    if (s == "chaotic") return ExperimentKind::chaotic;
    if (s == "multichannel_csv") return ExperimentKind::multichannel_csv;
    if (s == "morph") return ExperimentKind::morph;
    if (s == "online_adaptation") return ExperimentKind::online_adaptation;
    if (s == "custom") return ExperimentKind::custom;
    throw config_error("unknown experiment kind '" + s + "'");
}

EmitKind emit_from_string(const std::string& s) {
    if (s == "recall_csv") return EmitKind::recall_csv;
    if (s == "nrmse_table") return EmitKind::nrmse_table;
    if (s == "singular_values") return EmitKind::singular_values;
    if (s == "state_clouds") return EmitKind::state_clouds;
    if (s == "delay_embedding") return EmitKind::delay_embedding;
    if (s == "mu_trace") return EmitKind::mu_trace;
    throw config_error("unknown emit kind '" + s + "'");
}

TrainingMode mode_from_string(const std::string& s) {
    if (s == "conceptor") return TrainingMode::conceptor;
    if (s == "diagonal_explicit") return TrainingMode::diagonal_explicit;
    if (s == "diagonal_iterative") return TrainingMode::diagonal_iterative;
    throw config_error("unknown training mode '" + s + "'");
}

AttractorSystem system_from_string(const std::string& s) {
    if (s == "rossler") return AttractorSystem::rossler;
    if (s == "lorenz") return AttractorSystem::lorenz;
    if (s == "mackey_glass") return AttractorSystem::mackey_glass;
    if (s == "henon") return AttractorSystem::henon;
    throw config_error("unknown attractor system '" + s + "'");
}

std::string pattern_kind_string(PatternSpec::Kind kind) {
    switch (kind) {
        case PatternSpec::Kind::sine: return "sine";
        case PatternSpec::Kind::periodic_random: return "periodic_random";
        case PatternSpec::Kind::attractor: return "attractor";
        case PatternSpec::Kind::csv: return "csv";
        case PatternSpec::Kind::synthetic: return "synthetic";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// JSON parsing

template <typename T>
T require(const json& j, const std::string& key, const std::string& context) {
    if (!j.contains(key))
        throw config_error("missing '" + key + "' in " + context);
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw config_error("bad value for '" + key + "' in " + context);
    }
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw config_error("bad value for '" + key + "'");
    }
}

ReservoirConfig parse_reservoir(const json& j) {
    ReservoirConfig cfg;
    cfg.n_neurons = require<Index>(j, "n_neurons", "reservoir");
    cfg.n_inputs = require<Index>(j, "n_inputs", "reservoir");
    cfg.w_star_scaling = get_or(j, "w_star_scaling", 1.0);
    cfg.w_in_scaling = get_or(j, "w_in_scaling", 1.0);
    cfg.bias_scaling = get_or(j, "bias_scaling", 0.2);
    cfg.leaking_rate = get_or(j, "leaking_rate", 1.0);
    if (j.contains("sparsity") && !j.at("sparsity").is_null())
        cfg.sparsity = j.at("sparsity").get<double>();
    cfg.seed = get_or<std::uint64_t>(j, "seed", 1);
    return cfg;
}

TrainingPlan parse_plan(const json& j) {
    TrainingPlan plan;
    plan.mode = mode_from_string(require<std::string>(j, "mode", "plan"));
    plan.n_washout = require<Index>(j, "n_washout", "plan");
    plan.n_stage1 = get_or<Index>(j, "n_stage1", 0);
    plan.stage1_fraction = get_or(j, "stage1_fraction", 0.0);
    plan.n_stage1_per_pattern = get_or(j, "n_stage1_per_pattern", std::vector<Index>{});
    if (j.contains("apertures") && j.at("apertures").is_number())
        plan.apertures = {j.at("apertures").get<double>()};
    else
        plan.apertures = require<std::vector<double>>(j, "apertures", "plan");
    plan.ridge.rho_w = get_or(j, "rho_w", 0.0);
    plan.ridge.rho_wout = get_or(j, "rho_wout", 0.0);
    plan.reuse_stage1 = get_or(j, "reuse_stage1", false);
    plan.seed = get_or<std::uint64_t>(j, "seed", 2);
    const std::string scaling = get_or<std::string>(j, "init_scaling", "random");
    if (scaling == "random")
        plan.init_scaling = InitScaling::random;
    else if (scaling == "identity")
        plan.init_scaling = InitScaling::identity;
    else
        throw config_error("unknown init_scaling '" + scaling + "'");
    plan.rate = get_or(j, "rate", 0.5);
    plan.rate_boost_below_half = get_or(j, "rate_boost_below_half", 1.0);
    return plan;
}

PatternSpec parse_pattern(const json& j, std::size_t index) {
    const std::string context = "patterns[" + std::to_string(index) + "]";
    PatternSpec spec;
    const std::string type = require<std::string>(j, "type", context);
    spec.name = get_or<std::string>(j, "name", "");
    if (type == "sine") {
        spec.kind = PatternSpec::Kind::sine;
        spec.period = require<double>(j, "period", context);
        spec.length = require<Index>(j, "length", context);
    } else if (type == "periodic_random") {
        spec.kind = PatternSpec::Kind::periodic_random;
        spec.int_period = require<Index>(j, "period", context);
        spec.length = require<Index>(j, "length", context);
        spec.seed = require<std::uint64_t>(j, "seed", context);
        spec.perturbation = get_or(j, "perturbation", 0.0);
    } else if (type == "attractor") {
        spec.kind = PatternSpec::Kind::attractor;
        spec.attractor =
            AttractorParams::defaults(system_from_string(require<std::string>(j, "system", context)));
        spec.length = require<Index>(j, "length", context);
        spec.attractor.step_size = get_or(j, "step_size", spec.attractor.step_size);
        spec.attractor.subsample = get_or(j, "subsample", spec.attractor.subsample);
        spec.attractor.transient_steps =
            get_or(j, "transient_steps", spec.attractor.transient_steps);
        if (j.contains("initial_condition"))
            spec.attractor.initial_condition =
                j.at("initial_condition").get<std::vector<double>>();
        if (j.contains("constants"))
            for (const auto& [key, value] : j.at("constants").items())
                spec.attractor.constants[key] = value.get<double>();
    } else if (type == "csv") {
        spec.kind = PatternSpec::Kind::csv;
        spec.path = require<std::string>(j, "path", context);
        spec.normalize = get_or(j, "normalize", false);
        spec.smooth_window = get_or<Index>(j, "smooth_window", 0);
    } else if (type == "synthetic") {
        spec.kind = PatternSpec::Kind::synthetic;
        spec.channels = get_or<Index>(j, "channels", 10);
        spec.length = require<Index>(j, "length", context);
        spec.seed = require<std::uint64_t>(j, "seed", context);
        spec.variant = get_or<Index>(j, "variant", 0);
    } else {
        throw config_error("unknown pattern type '" + type + "' in " + context);
    }
    return spec;
}

json pattern_to_json(const PatternSpec& spec) {
    json j;
    j["type"] = pattern_kind_string(spec.kind);
    if (!spec.name.empty()) j["name"] = spec.name;
    switch (spec.kind) {
        case PatternSpec::Kind::sine:
            j["period"] = spec.period;
            j["length"] = spec.length;
            break;
        case PatternSpec::Kind::periodic_random:
            j["period"] = spec.int_period;
            j["length"] = spec.length;
            j["seed"] = spec.seed;
            j["perturbation"] = spec.perturbation;
            break;
        case PatternSpec::Kind::attractor:
            j["system"] = to_string(spec.attractor.system);
            j["length"] = spec.length;
            j["step_size"] = spec.attractor.step_size;
            j["subsample"] = spec.attractor.subsample;
            j["transient_steps"] = spec.attractor.transient_steps;
            j["initial_condition"] = spec.attractor.initial_condition;
            j["constants"] = spec.attractor.constants;
            break;
        case PatternSpec::Kind::csv:
            j["path"] = spec.path.string();
            j["normalize"] = spec.normalize;
            j["smooth_window"] = spec.smooth_window;
            break;
        case PatternSpec::Kind::synthetic:
            j["channels"] = spec.channels;
            j["length"] = spec.length;
            j["seed"] = spec.seed;
            j["variant"] = spec.variant;
            break;
    }
    return j;
}

json config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["name"] = cfg.name;
    j["experiment"] = to_string(cfg.experiment);
    j["reservoir"] = {{"n_neurons", cfg.reservoir.n_neurons},
                      {"n_inputs", cfg.reservoir.n_inputs},
                      {"w_star_scaling", cfg.reservoir.w_star_scaling},
                      {"w_in_scaling", cfg.reservoir.w_in_scaling},
                      {"bias_scaling", cfg.reservoir.bias_scaling},
                      {"leaking_rate", cfg.reservoir.leaking_rate},
                      {"seed", cfg.reservoir.seed}};
    if (cfg.reservoir.sparsity) j["reservoir"]["sparsity"] = *cfg.reservoir.sparsity;
    j["plan"] = {{"mode", to_string(cfg.plan.mode)},
                 {"n_washout", cfg.plan.n_washout},
                 {"n_stage1", cfg.plan.n_stage1},
                 {"stage1_fraction", cfg.plan.stage1_fraction},
                 {"n_stage1_per_pattern", cfg.plan.n_stage1_per_pattern},
                 {"apertures", cfg.plan.apertures},
                 {"rho_w", cfg.plan.ridge.rho_w},
                 {"rho_wout", cfg.plan.ridge.rho_wout},
                 {"reuse_stage1", cfg.plan.reuse_stage1},
                 {"seed", cfg.plan.seed},
                 {"init_scaling",
                  cfg.plan.init_scaling == InitScaling::random ? "random" : "identity"},
                 {"rate", cfg.plan.rate},
                 {"rate_boost_below_half", cfg.plan.rate_boost_below_half}};
    j["patterns"] = json::array();
    for (const auto& spec : cfg.patterns) j["patterns"].push_back(pattern_to_json(spec));
    if (cfg.morph)
        j["morph"] = {{"idx1", cfg.morph->idx1},   {"idx2", cfg.morph->idx2},
                      {"mu_min", cfg.morph->mu_min}, {"mu_max", cfg.morph->mu_max},
                      {"n_pre", cfg.morph->n_pre},   {"n_morph", cfg.morph->n_morph},
                      {"n_post", cfg.morph->n_post}, {"nudge", cfg.morph->nudge}};
    // The output directory is not echoed: the manifest lives inside it, and
    // leaving it out keeps reruns into different directories byte-identical.
    std::vector<std::string> emits;
    for (const auto& e : cfg.emit) emits.push_back(to_string(e));
    j["emit"] = emits;
    j["recall"] = {{"n_steps", cfg.recall.n_steps},
                   {"d_max", cfg.recall.d_max},
                   {"k_stability", cfg.recall.k_stability}};
    j["cloud_neurons"] = {cfg.cloud_neurons[0], cfg.cloud_neurons[1]};
    j["embed"] = {{"channel", cfg.embed_channel}, {"delay", cfg.embed_delay}};
    return j;
}

// ---------------------------------------------------------------------------
// artifact helpers

std::ofstream open_artifact(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open " + path.string() + " for writing");
    return out;
}

void write_columns_csv(const std::filesystem::path& path,
                       const std::vector<std::string>& header,
                       const std::vector<const Vector*>& columns) {
    auto out = open_artifact(path);
    out << "step";
    for (const auto& h : header) out << ',' << h;
    out << '\n';
    Index rows = columns.empty() ? 0 : columns[0]->size();
    for (Index r = 0; r < rows; ++r) {
        out << r;
        for (const auto* col : columns) out << ',' << format_double((*col)(r));
        out << '\n';
    }
    if (!out) throw io_error("write failed for " + path.string());
}

struct PatternEval {
    std::string label;
    Pattern recall;
    Matrix recall_z;       // N x steps
    Matrix target;         // steps x M
    NrmseReport report;
    double stability_first = 0.0;
    double stability_last = 0.0;
    Vector aligned_obs, aligned_tgt;  // 1-channel only
};

Vector singular_values_descending(const Matrix& symmetric) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric, Eigen::EigenvaluesOnly);
    Vector v = es.eigenvalues();
    std::sort(v.data(), v.data() + v.size(), std::greater<double>());
    return v;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::periodic: return "periodic";
        case ExperimentKind::chaotic: return "chaotic";
        case ExperimentKind::multichannel_csv: return "multichannel_csv";
        case ExperimentKind::morph: return "morph";
        case ExperimentKind::online_adaptation: return "online_adaptation";
        case ExperimentKind::custom: return "custom";
    }
    return "unknown";
}

std::string to_string(EmitKind kind) {
    switch (kind) {
        case EmitKind::recall_csv: return "recall_csv";
        case EmitKind::nrmse_table: return "nrmse_table";
        case EmitKind::singular_values: return "singular_values";
        case EmitKind::state_clouds: return "state_clouds";
        case EmitKind::delay_embedding: return "delay_embedding";
        case EmitKind::mu_trace: return "mu_trace";
    }
    return "unknown";
}

Pattern realize(const PatternSpec& spec) {
    Pattern p;
    switch (spec.kind) {
        case PatternSpec::Kind::sine:
            p = gen_sine(spec.period, spec.length);
            break;
        case PatternSpec::Kind::periodic_random:
            p = gen_periodic_random(spec.int_period, spec.length, spec.seed,
                                    spec.perturbation);
            break;
        case PatternSpec::Kind::attractor:
            p = gen_attractor(spec.attractor, spec.length);
            break;
        case PatternSpec::Kind::csv:
            if (!std::filesystem::exists(spec.path))
                throw config_error("pattern file does not exist: " + spec.path.string());
            p = load_csv(spec.path, spec.normalize, spec.smooth_window);
            break;
        case PatternSpec::Kind::synthetic:
            p = gen_mixed_multichannel(spec.channels, spec.length, spec.seed, spec.variant);
            break;
    }
    if (!spec.name.empty()) p.name = spec.name;
    return p;
}

std::vector<Pattern> realize_patterns(const std::vector<PatternSpec>& specs) {
    std::vector<Pattern> out;
    out.reserve(specs.size());
    for (const auto& spec : specs) out.push_back(realize(spec));
    return out;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw config_error("malformed JSON in " + path.string() + ": " + e.what());
    }

    ExperimentConfig cfg;
    cfg.experiment = experiment_from_string(get_or<std::string>(j, "experiment", "custom"));
    cfg.name = get_or<std::string>(j, "name", to_string(cfg.experiment));
    if (!j.contains("reservoir")) throw config_error("missing 'reservoir' section");
    cfg.reservoir = parse_reservoir(j.at("reservoir"));
    if (!j.contains("plan")) throw config_error("missing 'plan' section");
    cfg.plan = parse_plan(j.at("plan"));
    if (!j.contains("patterns") || !j.at("patterns").is_array()
        || j.at("patterns").empty())
        throw config_error("missing or empty 'patterns' array");
    for (std::size_t i = 0; i < j.at("patterns").size(); ++i)
        cfg.patterns.push_back(parse_pattern(j.at("patterns")[i], i));
    if (j.contains("morph")) {
        const json& m = j.at("morph");
        MorphSpec spec;
        spec.idx1 = require<Index>(m, "idx1", "morph");
        spec.idx2 = require<Index>(m, "idx2", "morph");
        spec.mu_min = require<double>(m, "mu_min", "morph");
        spec.mu_max = require<double>(m, "mu_max", "morph");
        spec.n_pre = get_or<Index>(m, "n_pre", 0);
        spec.n_morph = require<Index>(m, "n_morph", "morph");
        spec.n_post = get_or<Index>(m, "n_post", 0);
        spec.nudge = get_or(m, "nudge", false);
        cfg.morph = spec;
    }
    cfg.outputs = get_or<std::string>(j, "outputs", "out");
    for (const auto& e : get_or(j, "emit", std::vector<std::string>{}))
        cfg.emit.insert(emit_from_string(e));
    if (j.contains("recall")) {
        const json& r = j.at("recall");
        cfg.recall.n_steps = get_or<Index>(r, "n_steps", 0);
        cfg.recall.d_max = get_or<Index>(r, "d_max", 0);
        cfg.recall.k_stability = get_or<Index>(r, "k_stability", 200);
    }
    if (j.contains("cloud_neurons")) {
        const auto v = j.at("cloud_neurons").get<std::vector<Index>>();
        if (v.size() != 2) throw config_error("cloud_neurons must list two neuron indices");
        cfg.cloud_neurons = {v[0], v[1]};
    }
    if (j.contains("embed")) {
        cfg.embed_channel = get_or<Index>(j.at("embed"), "channel", 0);
        cfg.embed_delay = get_or<Index>(j.at("embed"), "delay", 1);
    }
    return cfg;
}

int run(const ExperimentConfig& config, std::ostream& log) {
    std::vector<Pattern> patterns;
    Reservoir reservoir;
    try {
        // Validation stage: nothing is written until all of it passes.
        config.reservoir.validate();
        config.plan.ridge.validate();
        if (config.patterns.empty()) throw config_error("no patterns configured");
        patterns = realize_patterns(config.patterns);
        for (const auto& p : patterns)
            if (p.channels() != config.reservoir.n_inputs)
                throw config_error("pattern '" + p.name + "' has " + std::to_string(p.channels())
                                   + " channels but the reservoir expects "
                                   + std::to_string(config.reservoir.n_inputs));
        if (config.plan.apertures.empty())
            throw config_error("plan.apertures must not be empty");
        if (config.experiment == ExperimentKind::morph && !config.morph)
            throw config_error("morph experiment needs a 'morph' section");
        if (config.morph) {
            const Index p = static_cast<Index>(patterns.size());
            if (config.morph->idx1 < 0 || config.morph->idx1 >= p || config.morph->idx2 < 0
                || config.morph->idx2 >= p)
                throw config_error("morph indices out of range");
        }
        if (config.cloud_neurons[0] < 0 || config.cloud_neurons[0] >= config.reservoir.n_neurons
            || config.cloud_neurons[1] < 0
            || config.cloud_neurons[1] >= config.reservoir.n_neurons)
            throw config_error("cloud_neurons out of range");
        if (config.emit.count(EmitKind::delay_embedding)
            && (config.embed_channel < 0 || config.embed_channel >= config.reservoir.n_inputs
                || config.embed_delay < 1))
            throw config_error("delay embedding needs a valid channel and delay >= 1");
        reservoir = init_reservoir(config.reservoir);
    } catch (const config_error& e) {
        log << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        log << "config error: " << e.what() << '\n';
        return 2;
    }

    try {
        const std::string prefix = config.name.empty() ? to_string(config.experiment)
                                                       : config.name;
        TrainResult tr = train(reservoir, patterns, config.plan);
        log << "trained " << patterns.size() << " pattern(s), mode "
            << to_string(config.plan.mode) << '\n';

        // Recall + evaluation.
        std::vector<PatternEval> evals;
        for (Index j = 0; j < static_cast<Index>(patterns.size()); ++j) {
            PatternEval ev;
            ev.label = patterns[static_cast<std::size_t>(j)].name;
            ev.target = tr.target_windows[static_cast<std::size_t>(j)].transpose();
            const Index window = ev.target.rows();
            const Index steps = config.recall.n_steps > 0 ? config.recall.n_steps : window;
            RecallRun rr = self_generate_run(tr.system, j, steps);
            ev.recall = std::move(rr.output);
            ev.recall_z = std::move(rr.z_states);

            const Index common = std::min<Index>(steps, window);
            if (ev.recall.channels() == 1) {
                const Vector obs = ev.recall.data.col(0).head(common);
                const Vector tgt = ev.target.col(0).head(common);
                const Index d_max = config.recall.d_max > 0
                                        ? config.recall.d_max
                                        : std::min<Index>(common / 2, 600);
                const auto [d, err] = phase_align(obs, tgt, std::max<Index>(d_max, 1));
                const Index len = common - d + 1;
                ev.aligned_obs = obs.segment(d - 1, len);
                ev.aligned_tgt = tgt.head(len);
                ev.report.per_channel = Vector::Constant(1, err);
                ev.report.min = ev.report.max = ev.report.mean = err;
                ev.report.stddev = 0.0;
                ev.report.shift = d;
                ev.report.compared_steps = len;
                const Index k = std::min<Index>(config.recall.k_stability, len);
                std::tie(ev.stability_first, ev.stability_last) =
                    long_term_stability(ev.aligned_obs, ev.aligned_tgt, k);
            } else {
                const Matrix obs = ev.recall.data.topRows(common);
                const Matrix tgt = ev.target.topRows(common);
                ev.report = nrmse_multichannel(obs, tgt);
                const Index k = std::min<Index>(config.recall.k_stability, common);
                std::tie(ev.stability_first, ev.stability_last) =
                    long_term_stability(obs, tgt, k);
            }
            log << "pattern " << j << " (" << ev.label << "): nrmse mean "
                << format_double(ev.report.mean);
            if (ev.report.shift) log << ", shift " << *ev.report.shift;
            log << ", stability first/last " << format_double(ev.stability_first) << '/'
                << format_double(ev.stability_last) << '\n';
            evals.push_back(std::move(ev));
        }

        // Morph run.
        std::optional<std::pair<Pattern, Vector>> morph_result;
        if (config.morph) morph_result = morph_run(tr.system, *config.morph);

        // Artifacts.
        std::error_code ec;
        std::filesystem::create_directories(config.outputs, ec);
        if (ec) throw io_error("cannot create output directory " + config.outputs.string());
        const auto artifact = [&](const std::string& suffix) {
            return config.outputs / (prefix + "_" + suffix);
        };

        if (config.emit.count(EmitKind::recall_csv)) {
            for (std::size_t j = 0; j < evals.size(); ++j) {
                const auto& ev = evals[j];
                const auto path = artifact("p" + std::to_string(j) + "_recall.csv");
                if (ev.recall.channels() == 1) {
                    write_columns_csv(path, {"target", "recall"},
                                      {&ev.aligned_tgt, &ev.aligned_obs});
                } else {
                    auto out = open_artifact(path);
                    out << "step";
                    for (Index c = 0; c < ev.target.cols(); ++c) out << ",target_" << c;
                    for (Index c = 0; c < ev.recall.channels(); ++c) out << ",recall_" << c;
                    out << '\n';
                    const Index rows = std::min<Index>(ev.target.rows(), ev.recall.length());
                    for (Index r = 0; r < rows; ++r) {
                        out << r;
                        for (Index c = 0; c < ev.target.cols(); ++c)
                            out << ',' << format_double(ev.target(r, c));
                        for (Index c = 0; c < ev.recall.channels(); ++c)
                            out << ',' << format_double(ev.recall.data(r, c));
                        out << '\n';
                    }
                }
            }
            if (morph_result) {
                auto out = open_artifact(artifact("morph_output.csv"));
                const Pattern& m = morph_result->first;
                out << "step";
                for (Index c = 0; c < m.channels(); ++c) out << ",channel_" << c;
                out << '\n';
                for (Index r = 0; r < m.length(); ++r) {
                    out << r;
                    for (Index c = 0; c < m.channels(); ++c)
                        out << ',' << format_double(m.data(r, c));
                    out << '\n';
                }
            }
        }

        if (config.emit.count(EmitKind::nrmse_table)) {
            {
                auto out = open_artifact(artifact("nrmse.csv"));
                out << "pattern,channel,nrmse\n";
                for (std::size_t j = 0; j < evals.size(); ++j)
                    for (Index c = 0; c < evals[j].report.per_channel.size(); ++c)
                        out << j << ',' << c << ','
                            << format_double(evals[j].report.per_channel(c)) << '\n';
            }
            auto out = open_artifact(artifact("nrmse_table.csv"));
            out << "stat";
            for (std::size_t j = 0; j < evals.size(); ++j) out << ",p" << j;
            out << '\n';
            const auto row = [&](const std::string& stat, auto getter) {
                out << stat;
                for (const auto& ev : evals) out << ',' << format_double(getter(ev));
                out << '\n';
            };
            row("min", [](const PatternEval& e) { return e.report.min; });
            row("max", [](const PatternEval& e) { return e.report.max; });
            row("mean", [](const PatternEval& e) { return e.report.mean; });
            row("std", [](const PatternEval& e) { return e.report.stddev; });
            row("stability_first", [](const PatternEval& e) { return e.stability_first; });
            row("stability_last", [](const PatternEval& e) { return e.stability_last; });
        }

        if (config.emit.count(EmitKind::singular_values)) {
            for (std::size_t j = 0; j < tr.correlations.size(); ++j) {
                auto out = open_artifact(artifact("p" + std::to_string(j)
                                                  + "_singular_values.csv"));
                out << "index,sigma,log10_sigma\n";
                const Vector sv = singular_values_descending(tr.correlations[j].m);
                for (Index i = 0; i < sv.size(); ++i) {
                    const double sigma = std::max(sv(i), 0.0);
                    out << i << ',' << format_double(sigma) << ','
                        << format_double(std::log10(std::max(sigma, 1e-300))) << '\n';
                }
            }
        }

        if (config.emit.count(EmitKind::state_clouds)) {
            const Index a = config.cloud_neurons[0];
            const Index b = config.cloud_neurons[1];
            for (std::size_t j = 0; j < evals.size(); ++j) {
                auto out = open_artifact(artifact("p" + std::to_string(j)
                                                  + "_state_cloud.csv"));
                out << "phase,neuron_" << a << ",neuron_" << b << '\n';
                const auto dump = [&](const char* phase, const Matrix& states) {
                    for (Index k = 0; k < states.cols(); ++k)
                        out << phase << ',' << format_double(states(a, k)) << ','
                            << format_double(states(b, k)) << '\n';
                };
                if (j < tr.stage1_states.size()) dump("stage1", tr.stage1_states[j]);
                dump("collect", tr.harvest_states[j]);
                dump("recall", evals[j].recall_z);
            }
        }

        if (config.emit.count(EmitKind::delay_embedding)) {
            for (std::size_t j = 0; j < evals.size(); ++j) {
                const Pattern target{evals[j].label, evals[j].target};
                const Pattern embedded_target =
                    delay_embed(target, config.embed_channel, config.embed_delay);
                const Pattern embedded_recall =
                    delay_embed(evals[j].recall, config.embed_channel, config.embed_delay);
                const auto write_embed = [&](const std::string& suffix, const Pattern& p) {
                    auto out = open_artifact(artifact("p" + std::to_string(j) + suffix));
                    out << "x,y\n";
                    for (Index r = 0; r < p.length(); ++r)
                        out << format_double(p.data(r, 0)) << ','
                            << format_double(p.data(r, 1)) << '\n';
                };
                write_embed("_embed_target.csv", embedded_target);
                write_embed("_embed_recall.csv", embedded_recall);
            }
        }

        if (config.emit.count(EmitKind::mu_trace) && morph_result) {
            write_columns_csv(artifact("morph_mu.csv"), {"mu"}, {&morph_result->second});
        }

        // Manifest: full configuration echo plus realized pattern metadata.
        {
            json manifest;
            manifest["config"] = config_to_json(config);
            manifest["patterns_realized"] = json::array();
            for (const auto& p : patterns)
                manifest["patterns_realized"].push_back(
                    {{"name", p.name}, {"length", p.length()}, {"channels", p.channels()}});
            json results = json::array();
            for (std::size_t j = 0; j < evals.size(); ++j)
                results.push_back({{"pattern", j},
                                   {"nrmse_mean", evals[j].report.mean},
                                   {"nrmse_max", evals[j].report.max}});
            manifest["results"] = results;
            auto out = open_artifact(config.outputs / (prefix + "_manifest.json"));
            out << manifest.dump(2) << '\n';
        }

        log << "artifacts written to " << config.outputs.string() << '\n';
        return 0;
    } catch (const divergence_error& e) {
        log << "training/recall divergence: " << e.what() << '\n';
        return 3;
    } catch (const numeric_error& e) {
        log << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const io_error& e) {
        log << "i/o error: " << e.what() << '\n';
        return 4;
    } catch (const config_error& e) {
        log << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        log << "config error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace clab
