#include "clab/loading.hpp"

#include <Eigen/Cholesky>

namespace clab {

Matrix ridge_solve(const Matrix& design, const Matrix& targets, double rho) {
    if (rho < 0.0) throw std::invalid_argument("ridge_solve: rho must be >= 0");
    if (design.cols() != targets.cols())
        throw std::invalid_argument("ridge_solve: design and targets must share columns");
    Matrix gram = design * design.transpose();
    gram.diagonal().array() += rho;
    Eigen::LLT<Matrix> llt(gram);
    if (llt.info() != Eigen::Success)
        throw numeric_error("ridge_solve: A A^T + rho I is singular; increase rho (> 0)");
    // Guard against semidefinite systems that slip through LLT.
    Matrix solution = llt.solve(design * targets.transpose());
    if (!solution.allFinite())
        throw numeric_error("ridge_solve: singular system produced non-finite solution; "
                            "increase rho (> 0)");
    return solution.transpose();
}

StateHarvest harvest(const Reservoir& res, const Pattern& pattern,
                     const StateFilter& filter, Index washout, Index collect,
                     const std::optional<Vector>& initial, Index first_row,
                     const std::optional<Vector>& initial_r) {
    if (washout < 0 || collect < 1)
        throw std::invalid_argument("harvest: washout must be >= 0 and collect >= 1");
    if (first_row < 0 || first_row + washout + collect > pattern.length())
        throw std::invalid_argument("harvest: window exceeds the pattern length");
    if (pattern.channels() != res.n_inputs())
        throw std::invalid_argument("harvest: pattern channels do not match reservoir inputs");

    const Index n = res.n_neurons();
    const double alpha = res.leaking_rate;
    Vector z = initial.value_or(Vector::Zero(n));
    Vector r = initial_r.value_or(z);
    if (r.size() != n || z.size() != n)
        throw std::invalid_argument("harvest: initial state dimension mismatch");

    StateHarvest h;
    h.states.resize(n, collect);
    h.prev_states.resize(n, collect);
    h.inputs.resize(pattern.channels(), collect);
    h.w_targets.resize(n, collect);

    for (Index step = 0; step < washout + collect; ++step) {
        const Vector input = pattern.sample(first_row + step);
        if (step == washout) {
            h.start_r = r;
            h.start_z = z;
        }
        const Vector drive = res.w_star * z + res.w_in * input;
        r = (1.0 - alpha) * r + alpha * (drive + res.bias).array().tanh().matrix();
        const Vector z_next = filter.apply(r);
        if (step >= washout) {
            const Index k = step - washout;
            h.prev_states.col(k) = z;
            h.states.col(k) = z_next;
            h.inputs.col(k) = input;
            h.w_targets.col(k) = drive;  // W* z(t-1) + W^in p(t)
        }
        z = z_next;
        if (!z.allFinite())
            throw divergence_error("harvest: non-finite state", -1, first_row + step);
    }
    h.end_r = r;
    h.end_z = z;
    return h;
}

std::pair<Matrix, Matrix> store_patterns(const std::vector<StateHarvest>& harvests,
                                         const RidgeConfig& cfg) {
    cfg.validate();
    if (harvests.empty())
        throw std::invalid_argument("store_patterns: at least one harvest required");
    const Index n = harvests.front().states.rows();
    const Index m = harvests.front().inputs.rows();
    Index total = 0;
    for (const auto& h : harvests) {
        if (h.states.rows() != n || h.inputs.rows() != m)
            throw std::invalid_argument("store_patterns: inconsistent harvest dimensions");
        total += h.size();
    }

    Matrix states(n, total), prev(n, total), inputs(m, total), targets(n, total);
    Index offset = 0;
    for (const auto& h : harvests) {
        states.middleCols(offset, h.size()) = h.states;
        prev.middleCols(offset, h.size()) = h.prev_states;
        inputs.middleCols(offset, h.size()) = h.inputs;
        targets.middleCols(offset, h.size()) = h.w_targets;
        offset += h.size();
    }

    Matrix w = ridge_solve(prev, targets, cfg.rho_w);
    Matrix w_out = ridge_solve(states, inputs, cfg.rho_wout);
    return {std::move(w), std::move(w_out)};
}

}  // namespace clab
