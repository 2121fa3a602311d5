#include "clab/trainer.hpp"

#include <cmath>

#include "clab/rng.hpp"

namespace clab {

namespace {

struct SysState {
    Vector r;
    Vector z;
};

/// One filtered update of the coupled (r, z) state.
void filtered_step(const Reservoir& res, SysState& s, const Vector& input,
                   const StateFilter& filter) {
    const double alpha = res.leaking_rate;
    s.r = (1.0 - alpha) * s.r
          + alpha * (res.w_star * s.z + res.w_in * input + res.bias).array().tanh().matrix();
    s.z = filter.apply(s.r);
}

struct Stage1Result {
    Matrix z_states;      // N x n_stage1
    Vector final_weights; // adapted weights (iterative) or D0 (explicit)
    SysState after_washout;
    SysState after_stage1;
};

/// Washout plus stage 1 under D0. With `adapt`, the conception weights are
/// updated every step by the per-neuron rule; otherwise D0 stays fixed and
/// the caller computes the weights in closed form from the collected states.
Stage1Result run_diagonal_stage1(const Reservoir& res, const Pattern& pattern,
                                 const Vector& d0, double aperture, Index washout,
                                 Index stage1, bool adapt, const Vector& rates,
                                 double rate_boost, Index pattern_index) {
    const Index n = res.n_neurons();
    Stage1Result out;
    SysState s{Vector::Zero(n), Vector::Zero(n)};
    Vector c = d0;

    for (Index t = 0; t < washout; ++t)
        filtered_step(res, s, pattern.sample(t), StateFilter::diagonal(d0));
    out.after_washout = s;

    out.z_states.resize(n, stage1);
    const double reg = 1.0 / (aperture * aperture);
    for (Index i = 0; i < stage1; ++i) {
        filtered_step(res, s, pattern.sample(washout + i), StateFilter::diagonal(c));
        out.z_states.col(i) = s.z;
        if (adapt) {
            Vector eff = rates;
            if (rate_boost != 1.0)
                eff = (c.array() < 0.5).select(rates * rate_boost, rates);
            c = c.array()
                + eff.array() * ((1.0 - c.array()) * s.z.array().square() - reg * c.array());
            if (!c.allFinite())
                throw divergence_error("train: conception weights diverged", pattern_index,
                                       washout + i + 1);
        }
    }
    out.final_weights = std::move(c);
    out.after_stage1 = s;
    return out;
}

void monitor_recall_state(const Vector& z, const Vector& y, Index pattern, Index step) {
    if (!z.allFinite() || z.cwiseAbs().maxCoeff() > 10.0 || !y.allFinite())
        throw divergence_error("autonomous run: state diverged", pattern, step);
}

}  // namespace

std::string to_string(TrainingMode mode) {
    switch (mode) {
        case TrainingMode::conceptor: return "conceptor";
        case TrainingMode::diagonal_explicit: return "diagonal_explicit";
        case TrainingMode::diagonal_iterative: return "diagonal_iterative";
    }
    return "unknown";
}

double TrainingPlan::aperture_for(Index pattern) const {
    if (apertures.empty()) throw config_error("plan: apertures must be set");
    if (apertures.size() == 1) return apertures[0];
    if (pattern < 0 || pattern >= static_cast<Index>(apertures.size()))
        throw config_error("plan: no aperture for pattern " + std::to_string(pattern));
    return apertures[static_cast<std::size_t>(pattern)];
}

Index TrainingPlan::stage1_for(Index pattern, Index pattern_length) const {
    if (!n_stage1_per_pattern.empty()) {
        if (pattern < 0 || pattern >= static_cast<Index>(n_stage1_per_pattern.size()))
            throw config_error("plan: no stage-1 length for pattern "
                               + std::to_string(pattern));
        const Index v = n_stage1_per_pattern[static_cast<std::size_t>(pattern)];
        if (v >= 0) return v;
    }
    if (stage1_fraction > 0.0)
        return static_cast<Index>(
            std::ceil(stage1_fraction * static_cast<double>(pattern_length)));
    return n_stage1;
}

StateFilter LoadedSystem::filter(Index pattern) const {
    if (pattern < 0 || pattern >= n_patterns())
        throw std::invalid_argument("LoadedSystem: pattern index out of range");
    if (const auto* cs = std::get_if<std::vector<Conceptor>>(&filters))
        return StateFilter::full((*cs)[static_cast<std::size_t>(pattern)]);
    const auto& ds = std::get<std::vector<ConceptionVector>>(filters);
    return StateFilter::diagonal(ds[static_cast<std::size_t>(pattern)]);
}

TrainResult train(const Reservoir& reservoir, const std::vector<Pattern>& patterns,
                  const TrainingPlan& plan) {
    if (patterns.empty()) throw config_error("train: at least one pattern required");
    plan.ridge.validate();
    if (plan.mode != TrainingMode::conceptor && plan.ridge.rho_w <= 0.0)
        throw config_error("train: the diagonal pipeline requires rho_w > 0");
    if (plan.n_washout < 0) throw config_error("train: n_washout must be >= 0");
    for (const auto& p : patterns) {
        if (p.channels() != reservoir.n_inputs())
            throw config_error("train: pattern '" + p.name
                               + "' channel count does not match the reservoir");
    }

    const Index n = reservoir.n_neurons();
    const Index n_patterns = static_cast<Index>(patterns.size());
    const bool diagonal = plan.mode != TrainingMode::conceptor;

    Vector rates = plan.rates;
    if (plan.mode == TrainingMode::diagonal_iterative) {
        if (rates.size() == 0) rates = Vector::Constant(n, plan.rate);
        if (rates.size() != n)
            throw config_error("train: per-neuron rates must have one entry per neuron");
        if ((rates.array() <= 0.0).any())
            throw config_error("train: learning rates must be > 0");
    }

    TrainResult result;
    result.system.reservoir = reservoir;
    result.system.mode = plan.mode;
    result.system.seed = plan.seed;

    std::vector<StateHarvest> harvests;
    std::vector<Conceptor> conceptors;
    std::vector<ConceptionVector> conceptions;
    harvests.reserve(static_cast<std::size_t>(n_patterns));

    for (Index j = 0; j < n_patterns; ++j) {
        const Pattern& pattern = patterns[static_cast<std::size_t>(j)];
        const double aperture = plan.aperture_for(j);
        result.system.apertures.push_back(aperture);
        const Index length = pattern.length();

        if (!diagonal) {
            const Index n_learn = length - plan.n_washout;
            if (n_learn < 1)
                throw config_error("train: washout leaves no learning window for pattern "
                                   + std::to_string(j));
            StateHarvest h = harvest(reservoir, pattern, StateFilter::none(), plan.n_washout,
                                     n_learn);
            result.correlations.push_back(correlation(h.states));
            conceptors.push_back(compute_conceptor(result.correlations.back(), aperture));
            result.system.start_r.push_back(h.start_r);
            result.system.start_z.push_back(h.start_z);
            result.harvest_states.push_back(h.states);
            result.target_windows.push_back(h.inputs);
            harvests.push_back(std::move(h));
            continue;
        }

        const Index stage1 = plan.stage1_for(j, length);
        if (stage1 < 1)
            throw config_error("train: diagonal modes need n_stage1 >= 1 (pattern "
                               + std::to_string(j) + ")");
        const Index stage2 = length - plan.n_washout - stage1;
        if (plan.n_washout + stage1 > length || (!plan.reuse_stage1 && stage2 < 1))
            throw config_error("train: washout + stage 1 leaves no stage-2 window for "
                               "pattern "
                               + std::to_string(j));

        Vector d0 = plan.init_scaling == InitScaling::random
                        ? random_conception(n, derive_seed(plan.seed, static_cast<std::uint64_t>(j)))
                              .weights
                        : Vector::Ones(n);

        const bool adapt = plan.mode == TrainingMode::diagonal_iterative;
        Stage1Result s1 = run_diagonal_stage1(reservoir, pattern, d0, aperture,
                                              plan.n_washout, stage1, adapt, rates,
                                              plan.rate_boost_below_half, j);

        ConceptionVector c = adapt ? ConceptionVector{s1.final_weights, aperture}
                                   : compute_conception(s1.z_states, aperture);
        result.stage1_states.push_back(std::move(s1.z_states));

        StateHarvest h = [&] {
            try {
                return plan.reuse_stage1
                           ? harvest(reservoir, pattern, StateFilter::diagonal(c), 0,
                                     length - plan.n_washout, s1.after_washout.z,
                                     plan.n_washout, s1.after_washout.r)
                           : harvest(reservoir, pattern, StateFilter::diagonal(c), 0,
                                     stage2, s1.after_stage1.z, plan.n_washout + stage1,
                                     s1.after_stage1.r);
            } catch (const divergence_error& e) {
                throw divergence_error("train: state diverged during stage 2", j, e.step);
            }
        }();

        result.correlations.push_back(correlation(h.states));
        conceptions.push_back(std::move(c));
        result.system.start_r.push_back(h.start_r);
        result.system.start_z.push_back(h.start_z);
        result.harvest_states.push_back(h.states);
        result.target_windows.push_back(h.inputs);
        harvests.push_back(std::move(h));
    }

    auto [w, w_out] = store_patterns(harvests, plan.ridge);
    result.system.w = std::move(w);
    result.system.w_out = std::move(w_out);
    if (diagonal)
        result.system.filters = std::move(conceptions);
    else
        result.system.filters = std::move(conceptors);
    return result;
}

RecallRun self_generate_run(const LoadedSystem& sys, Index pattern_index, Index n_steps,
                            const std::optional<Vector>& initial) {
    if (pattern_index < 0 || pattern_index >= sys.n_patterns())
        throw std::invalid_argument("self_generate: pattern index out of range");
    if (n_steps < 1) throw std::invalid_argument("self_generate: n_steps must be >= 1");

    const double alpha = sys.reservoir.leaking_rate;
    Vector r, z;
    if (initial) {
        if (initial->size() != sys.reservoir.n_neurons())
            throw std::invalid_argument("self_generate: initial state dimension mismatch");
        r = *initial;
        z = *initial;
    } else {
        r = sys.start_r[static_cast<std::size_t>(pattern_index)];
        z = sys.start_z[static_cast<std::size_t>(pattern_index)];
    }

    const StateFilter filter = sys.filter(pattern_index);
    RecallRun run;
    run.z_states.resize(sys.reservoir.n_neurons(), n_steps);
    Matrix out(n_steps, sys.w_out.rows());
    for (Index k = 0; k < n_steps; ++k) {
        r = (1.0 - alpha) * r + alpha * (sys.w * z + sys.reservoir.bias).array().tanh().matrix();
        z = filter.apply(r);
        const Vector y = sys.w_out * z;
        monitor_recall_state(z, y, pattern_index, k + 1);
        out.row(k) = y.transpose();
        run.z_states.col(k) = z;
    }
    run.output = Pattern{"recall_" + std::to_string(pattern_index), std::move(out)};
    return run;
}

Pattern self_generate(const LoadedSystem& sys, Index pattern_index, Index n_steps,
                      const std::optional<Vector>& initial) {
    return self_generate_run(sys, pattern_index, n_steps, initial).output;
}

std::pair<Pattern, Vector> morph_run(const LoadedSystem& sys, const MorphSpec& spec) {
    if (spec.idx1 < 0 || spec.idx1 >= sys.n_patterns() || spec.idx2 < 0
        || spec.idx2 >= sys.n_patterns())
        throw std::invalid_argument("morph_run: pattern index out of range");
    if (spec.n_morph < 1) throw std::invalid_argument("morph_run: n_morph must be >= 1");
    if (spec.n_pre < 0 || spec.n_post < 0)
        throw std::invalid_argument("morph_run: hold lengths must be >= 0");

    const double alpha = sys.reservoir.leaking_rate;
    const Index total = spec.n_pre + spec.n_morph + spec.n_post;
    Vector r = sys.start_r[static_cast<std::size_t>(spec.idx1)];
    Vector z = sys.start_z[static_cast<std::size_t>(spec.idx1)];
    const Vector& nudge_target = sys.start_z[static_cast<std::size_t>(spec.idx2)];

    Matrix out(total, sys.w_out.rows());
    Vector mu_trace(total);
    for (Index i = 0; i < total; ++i) {
        double mu = spec.mu_min;
        bool ramping = false;
        if (i >= spec.n_pre && i < spec.n_pre + spec.n_morph) {
            const double t = static_cast<double>(i - spec.n_pre + 1)
                             / static_cast<double>(spec.n_morph);
            mu = spec.mu_min + (spec.mu_max - spec.mu_min) * t;
            ramping = true;
        } else if (i >= spec.n_pre + spec.n_morph) {
            mu = spec.mu_max;
        }

        StateFilter filter = StateFilter::none();
        if (const auto* cs = std::get_if<std::vector<Conceptor>>(&sys.filters)) {
            filter = StateFilter::full(
                Matrix((1.0 - mu) * (*cs)[static_cast<std::size_t>(spec.idx1)].m
                       + mu * (*cs)[static_cast<std::size_t>(spec.idx2)].m));
        } else {
            const auto& ds = std::get<std::vector<ConceptionVector>>(sys.filters);
            filter = StateFilter::diagonal(
                Vector((1.0 - mu) * ds[static_cast<std::size_t>(spec.idx1)].weights
                       + mu * ds[static_cast<std::size_t>(spec.idx2)].weights));
        }

        r = (1.0 - alpha) * r + alpha * (sys.w * z + sys.reservoir.bias).array().tanh().matrix();
        z = filter.apply(r);
        if (ramping && spec.nudge) z = (1.0 - mu) * z + mu * nudge_target;
        const Vector y = sys.w_out * z;
        monitor_recall_state(z, y, spec.idx1, i + 1);
        out.row(i) = y.transpose();
        mu_trace(i) = mu;
    }
    return {Pattern{"morph", std::move(out)}, std::move(mu_trace)};
}

}  // namespace clab
