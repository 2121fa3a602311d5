#pragma once

#include <cstdint>
#include <optional>

#include "clab/pattern.hpp"
#include "clab/types.hpp"

namespace clab {

/// Construction parameters for the random recurrent network.
struct ReservoirConfig {
    Index n_neurons = 0;          // N
    Index n_inputs = 0;           // M
    double w_star_scaling = 1.0;  // spectral radius of W* after normalization
    double w_in_scaling = 1.0;
    double bias_scaling = 0.2;
    double leaking_rate = 1.0;            // in [0, 1]
    std::optional<double> sparsity;       // default: 1 if N < 20, 10/N otherwise
    std::uint64_t seed = 0;

    double effective_sparsity() const;
    void validate() const;  // throws config_error
};

/// The fixed random dynamical substrate. Immutable after construction and
/// safe to share across threads; distinct patterns may be driven in parallel
/// on the same reservoir.
struct Reservoir {
    Matrix w_star;  // N x N, sparse entries, spectral radius = w_star_scaling
    Matrix w_in;    // N x M, dense
    Vector bias;    // N
    double leaking_rate = 1.0;

    Index n_neurons() const { return w_star.rows(); }
    Index n_inputs() const { return w_in.cols(); }
};

/// Builds the reservoir from `config`. Deterministic for a fixed seed: W*,
/// W^in and b draw from separate sub-streams (stream ids 0, 1, 2) in
/// row-major entry order. W* is sparse standard-normal, rescaled so its
/// spectral radius equals w_star_scaling; a degenerate all-zero draw is
/// retried on the next sub-seed with a warning.
Reservoir init_reservoir(const ReservoirConfig& config);

/// One leaky-integrator update:
///   x' = (1 - leaking_rate) * x + leaking_rate * tanh(W* x + W^in input + b).
/// Pure function; leaking_rate = 1 reduces to the plain tanh update.
Vector drive_step(const Reservoir& res, const Vector& state, const Vector& input);

/// Iterates drive_step over pattern rows [from, to); returns the visited
/// states as columns, in order.
Matrix drive(const Reservoir& res, const Vector& initial, const Pattern& pattern,
             Index from, Index to);

/// Drives the reservoir from the all-zeros and the all-ones initial states
/// on the same pattern and returns the first step at which the Euclidean
/// distance between the two trajectories falls below `tolerance` (an
/// operational check of the echo state property). Throws numeric_error with
/// the final residual when the trajectories never converge.
Index estimate_washout(const Reservoir& res, const Pattern& pattern, double tolerance);

/// Largest eigenvalue modulus, computed by a dense eigendecomposition.
double spectral_radius(const Matrix& m);

}  // namespace clab
