#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "clab/conceptor.hpp"
#include "clab/conception.hpp"
#include "clab/filter.hpp"
#include "clab/loading.hpp"
#include "clab/pattern.hpp"
#include "clab/reservoir.hpp"

namespace clab {

enum class TrainingMode { conceptor, diagonal_explicit, diagonal_iterative };

/// How the initial diagonal conceptors D0 are drawn. `identity` (all-ones
/// weights, i.e. no initial scaling) exists as the baseline against which
/// the random initialization's pull-apart effect is measured.
enum class InitScaling { random, identity };

std::string to_string(TrainingMode mode);

struct TrainingPlan {
    TrainingMode mode = TrainingMode::conceptor;
    Index n_washout = 0;
    Index n_stage1 = 0;              // diagonal modes
    double stage1_fraction = 0.0;    // > 0: n_stage1 = ceil(fraction * L) per pattern
    std::vector<Index> n_stage1_per_pattern;  // per-pattern override, -1 entries fall back
    std::vector<double> apertures;   // per pattern (size 1 broadcasts)
    RidgeConfig ridge;
    bool reuse_stage1 = false;       // re-drive the stage-1 window under the final D
    std::uint64_t seed = 0;          // D0 draws (sub-stream = pattern index)
    InitScaling init_scaling = InitScaling::random;

    // diagonal_iterative only.
    double rate = 0.5;               // broadcast per-neuron learning rate
    Vector rates;                    // explicit per-neuron rates (overrides `rate`)
    double rate_boost_below_half = 1.0;  // multiplier applied while c_i < 0.5 (1 = off)

    double aperture_for(Index pattern) const;
    Index stage1_for(Index pattern, Index pattern_length) const;
};

/// The trained artifact: recomputed reservoir weights, readout, one filter
/// per pattern and the saved recall starting states.
struct LoadedSystem {
    Matrix w;      // N x N
    Matrix w_out;  // M x N
    std::variant<std::vector<Conceptor>, std::vector<ConceptionVector>> filters;
    std::vector<Vector> start_r;  // state pair at the start of each pattern's
    std::vector<Vector> start_z;  // collection window
    Reservoir reservoir;

    TrainingMode mode = TrainingMode::conceptor;
    std::vector<double> apertures;
    std::uint64_t seed = 0;

    Index n_patterns() const { return static_cast<Index>(start_z.size()); }
    bool is_diagonal() const {
        return std::holds_alternative<std::vector<ConceptionVector>>(filters);
    }
    StateFilter filter(Index pattern) const;
};

/// Training byproducts kept for evaluation and artifact emission.
struct TrainResult {
    LoadedSystem system;
    std::vector<CorrelationMatrix> correlations;  // of the harvested states
    std::vector<Matrix> stage1_states;            // diagonal modes: N x n_stage1 each
    std::vector<Matrix> harvest_states;           // N x n_collect each
    std::vector<Matrix> target_windows;           // M x n_collect each (recall targets)
};

/// Runs the full training scheme for the chosen mode.
///
/// conceptor: drive plainly, harvest, compute C^j from each pattern's state
/// correlation, then solve the two ridge regressions.
///
/// diagonal_explicit: insert randomly initialized diagonal conceptors D0
/// during washout and stage 1, compute D from the stage-1 states, continue
/// driving under D through stage 2, harvest, then solve the regressions.
/// With reuse_stage1, the stage-1 input window is re-driven under the final
/// D (from the end-of-washout state) and included in the harvest.
///
/// diagonal_iterative: as explicit, but during stage 1 the conception
/// weights are adapted every time step by the per-neuron rule instead of
/// being computed in closed form at the end.
TrainResult train(const Reservoir& reservoir, const std::vector<Pattern>& patterns,
                  const TrainingPlan& plan);

/// Runs the loaded system autonomously with pattern `pattern_index`'s filter
/// in the loop:
///   r <- (1 - leak) r + leak tanh(W z + b);  z <- filter(r);  y = W_out z.
/// Starts from `initial` when given (seeding both r and z), else from the
/// stored starting state (required for transient patterns). Non-finite or
/// exploding states raise divergence_error with the step index.
Pattern self_generate(const LoadedSystem& sys, Index pattern_index, Index n_steps,
                      const std::optional<Vector>& initial = std::nullopt);

/// self_generate variant that also returns the visited z states (one column
/// per step), used for state-cloud artifacts.
struct RecallRun {
    Pattern output;
    Matrix z_states;  // N x n_steps
};
RecallRun self_generate_run(const LoadedSystem& sys, Index pattern_index, Index n_steps,
                            const std::optional<Vector>& initial = std::nullopt);

struct MorphSpec {
    Index idx1 = 0;
    Index idx2 = 1;
    double mu_min = 0.0;
    double mu_max = 1.0;
    Index n_pre = 0;
    Index n_morph = 1;
    Index n_post = 0;
    /// Blend the state toward pattern idx2's starting state during the ramp
    /// (used for diagonal morphs between transient patterns).
    bool nudge = false;
};

/// Runs the system under the mu-mixed filter (1 - mu) F(idx1) + mu F(idx2):
/// holds mu = mu_min for n_pre steps, ramps linearly to mu_max over n_morph
/// steps, holds for n_post. Returns the output pattern and the mu schedule.
std::pair<Pattern, Vector> morph_run(const LoadedSystem& sys, const MorphSpec& spec);

}  // namespace clab
