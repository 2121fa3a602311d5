#include "clab/reservoir.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <iostream>

#include "clab/rng.hpp"

namespace clab {

namespace {

// Sub-streams of the reservoir seed, in documented fixed order. Degenerate
// W* draws retry at kStreamWStarRetry + attempt.
constexpr std::uint64_t kStreamWStar = 0;
constexpr std::uint64_t kStreamWIn = 1;
constexpr std::uint64_t kStreamBias = 2;
constexpr std::uint64_t kStreamWStarRetry = 16;
constexpr int kMaxWStarRetries = 32;

Matrix draw_sparse_normal(Index n, double sparsity, Rng& rng) {
    Matrix m = Matrix::Zero(n, n);
    for (Index r = 0; r < n; ++r) {
        for (Index c = 0; c < n; ++c) {
            if (rng.uniform01() < sparsity) m(r, c) = rng.normal();
        }
    }
    return m;
}

}  // namespace

double ReservoirConfig::effective_sparsity() const {
    if (sparsity) return *sparsity;
    return n_neurons < 20 ? 1.0 : 10.0 / static_cast<double>(n_neurons);
}

void ReservoirConfig::validate() const {
    if (n_neurons < 1) throw config_error("reservoir: n_neurons must be >= 1");
    if (n_inputs < 1) throw config_error("reservoir: n_inputs must be >= 1");
    if (!(w_star_scaling > 0.0)) throw config_error("reservoir: w_star_scaling must be > 0");
    if (!(w_in_scaling > 0.0)) throw config_error("reservoir: w_in_scaling must be > 0");
    if (bias_scaling < 0.0) throw config_error("reservoir: bias_scaling must be >= 0");
    if (leaking_rate < 0.0 || leaking_rate > 1.0)
        throw config_error("reservoir: leaking_rate must be in [0, 1]");
    if (sparsity && (*sparsity <= 0.0 || *sparsity > 1.0))
        throw config_error("reservoir: sparsity must be in (0, 1]");
}

double spectral_radius(const Matrix& m) {
    Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

Reservoir init_reservoir(const ReservoirConfig& config) {
    config.validate();
    const Index n = config.n_neurons;
    const double sparsity = config.effective_sparsity();

    Reservoir res;
    res.leaking_rate = config.leaking_rate;

    {
        Rng rng(derive_seed(config.seed, kStreamWIn));
        res.w_in.resize(n, config.n_inputs);
        for (Index r = 0; r < n; ++r)
            for (Index c = 0; c < config.n_inputs; ++c)
                res.w_in(r, c) = config.w_in_scaling * rng.normal();
    }
    {
        Rng rng(derive_seed(config.seed, kStreamBias));
        res.bias.resize(n);
        for (Index r = 0; r < n; ++r) res.bias(r) = config.bias_scaling * rng.normal();
    }

    std::uint64_t stream = kStreamWStar;
    for (int attempt = 0;; ++attempt) {
        Rng rng(derive_seed(config.seed, stream));
        res.w_star = draw_sparse_normal(n, sparsity, rng);
        const double rho = spectral_radius(res.w_star);
        if (rho > 1e-12) {
            res.w_star *= config.w_star_scaling / rho;
            break;
        }
        if (attempt >= kMaxWStarRetries)
            throw numeric_error("init_reservoir: could not draw a W* with nonzero "
                                "spectral radius");
        std::cerr << "[clab] warning: degenerate W* draw (zero spectral radius), "
                     "retrying with next sub-seed\n";
        stream = kStreamWStarRetry + static_cast<std::uint64_t>(attempt);
    }
    return res;
}

Vector drive_step(const Reservoir& res, const Vector& state, const Vector& input) {
    if (state.size() != res.n_neurons())
        throw std::invalid_argument("drive_step: state dimension mismatch");
    if (input.size() != res.n_inputs())
        throw std::invalid_argument("drive_step: input dimension mismatch");
    const double alpha = res.leaking_rate;
    return (1.0 - alpha) * state
           + alpha
                 * (res.w_star * state + res.w_in * input + res.bias)
                       .array()
                       .tanh()
                       .matrix();
}

Matrix drive(const Reservoir& res, const Vector& initial, const Pattern& pattern,
             Index from, Index to) {
    if (from < 0 || from >= to || to > pattern.length())
        throw std::invalid_argument("drive: range [from, to) must be non-empty and inside "
                                    "the pattern");
    if (pattern.channels() != res.n_inputs())
        throw std::invalid_argument("drive: pattern channel count does not match reservoir "
                                    "inputs");
    Matrix states(res.n_neurons(), to - from);
    Vector x = initial;
    for (Index n = from; n < to; ++n) {
        x = drive_step(res, x, pattern.sample(n));
        states.col(n - from) = x;
    }
    return states;
}

Index estimate_washout(const Reservoir& res, const Pattern& pattern, double tolerance) {
    if (tolerance <= 0.0)
        throw std::invalid_argument("estimate_washout: tolerance must be positive");
    if (pattern.length() < 1)
        throw std::invalid_argument("estimate_washout: pattern must be non-empty");

    Vector a = Vector::Zero(res.n_neurons());
    Vector b = Vector::Ones(res.n_neurons());
    double residual = (a - b).norm();
    for (Index n = 0; n < pattern.length(); ++n) {
        const Vector input = pattern.sample(n);
        a = drive_step(res, a, input);
        b = drive_step(res, b, input);
        residual = (a - b).norm();
        if (residual < tolerance) return n + 1;
    }
    throw numeric_error("estimate_washout: trajectories did not converge within the "
                        "pattern (final residual "
                        + std::to_string(residual) + "); echo state property violated");
}

}  // namespace clab
