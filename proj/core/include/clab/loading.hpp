#pragma once

#include <optional>
#include <vector>

#include "clab/filter.hpp"
#include "clab/pattern.hpp"
#include "clab/reservoir.hpp"
#include "clab/types.hpp"

namespace clab {

/// Regularization constants for the two ridge regressions: rho_w recomputes
/// the reservoir weights W, rho_wout computes the readout W^out. rho_w = 0
/// is allowed but the factorization may fail on rank-deficient state
/// collections; the diagonal pipeline needs rho_w > 0.
struct RidgeConfig {
    double rho_w = 0.0;
    double rho_wout = 0.0;

    void validate() const {
        if (rho_w < 0.0 || rho_wout < 0.0)
            throw config_error("ridge: regularization constants must be >= 0");
    }
};

/// States and targets collected over one pattern's learning window. Column k
/// of `prev_states` is the state one step before column k of `states`;
/// `inputs` holds the pattern sample consumed at the step of column k.
/// `w_targets` is the recurrent-plus-input drive of the step that produced
/// column k, i.e. W* prev_states[k] + W^in inputs[k], which the recomputed W
/// must reproduce from prev_states[k] alone.
struct StateHarvest {
    Matrix states;       // N x n (x or z, filtered when a filter is in the loop)
    Matrix prev_states;  // N x n
    Matrix inputs;       // M x n
    Matrix w_targets;    // N x n

    Vector start_r, start_z;  // state just before the first collected step
    Vector end_r, end_z;      // state at the last collected step

    Index size() const { return states.cols(); }
};

/// Ridge regression: returns the K x N matrix
///   W = ((A A^T + rho I)^-1 A B^T)^T
/// minimizing ||B - W A||^2 + rho ||W||^2, via a Cholesky factorization of
/// the symmetric system (never an explicit inverse). A singular system at
/// rho = 0 raises numeric_error advising rho > 0.
Matrix ridge_solve(const Matrix& design, const Matrix& targets, double rho);

/// Drives the reservoir over pattern rows [first_row, first_row + washout +
/// collect), applying `filter` between r and z at every step (plain drive
/// when none), discards the washout and harvests the last `collect` steps.
/// `initial` seeds the loop-carried z (all-zeros when absent); `initial_r`
/// seeds r separately when a run is continued across a filter change,
/// otherwise r starts equal to z.
StateHarvest harvest(const Reservoir& res, const Pattern& pattern,
                     const StateFilter& filter, Index washout, Index collect,
                     const std::optional<Vector>& initial = std::nullopt,
                     Index first_row = 0,
                     const std::optional<Vector>& initial_r = std::nullopt);

/// Concatenates harvests column-wise and solves the two ridge regressions:
///   W     from prev_states -> w_targets  (stores the patterns)
///   W^out from states      -> inputs     (reads them out).
std::pair<Matrix, Matrix> store_patterns(const std::vector<StateHarvest>& harvests,
                                         const RidgeConfig& cfg);

}  // namespace clab
