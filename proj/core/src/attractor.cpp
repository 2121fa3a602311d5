#include "clab/attractor.hpp"

#include <array>
#include <cmath>
#include <functional>

namespace clab {

namespace {

double constant(const AttractorParams& p, const std::string& key, double fallback) {
    const auto it = p.constants.find(key);
    return it == p.constants.end() ? fallback : it->second;
}

using Deriv3 = std::function<std::array<double, 3>(const std::array<double, 3>&)>;

std::array<double, 3> rk4_step(const Deriv3& f, const std::array<double, 3>& s, double dt) {
    const auto k1 = f(s);
    const auto at = [&](const std::array<double, 3>& k, double h) {
        return std::array<double, 3>{s[0] + h * k[0], s[1] + h * k[1], s[2] + h * k[2]};
    };
    const auto k2 = f(at(k1, dt / 2.0));
    const auto k3 = f(at(k2, dt / 2.0));
    const auto k4 = f(at(k3, dt));
    return {s[0] + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            s[1] + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
            s[2] + dt / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])};
}

void check_finite(double a, double b, Index step) {
    if (!std::isfinite(a) || !std::isfinite(b))
        throw numeric_error("gen_attractor: divergent trajectory at integration step "
                            + std::to_string(step));
}

/// Flow systems share the integrate/discard/subsample loop; rows are the
/// first two state coordinates.
Matrix sample_flow(const Deriv3& f, std::array<double, 3> state, double dt,
                   Index transient, Index subsample, Index length) {
    Matrix raw(length, 2);
    Index step = 0;
    for (; step < transient; ++step) state = rk4_step(f, state, dt);
    for (Index k = 0; k < length; ++k) {
        check_finite(state[0], state[1], step);
        raw(k, 0) = state[0];
        raw(k, 1) = state[1];
        for (Index i = 0; i < subsample; ++i, ++step) state = rk4_step(f, state, dt);
    }
    return raw;
}

Matrix sample_henon(const AttractorParams& p, Index length) {
    const double a = constant(p, "a", 1.4);
    const double b = constant(p, "b", 0.3);
    double x = p.initial_condition.size() > 0 ? p.initial_condition[0] : 0.0;
    double y = p.initial_condition.size() > 1 ? p.initial_condition[1] : 0.0;
    Matrix raw(length, 2);
    Index step = 0;
    const auto iterate = [&] {
        const double nx = 1.0 - a * x * x + y;
        const double ny = b * x;
        x = nx;
        y = ny;
        ++step;
    };
    for (Index i = 0; i < p.transient_steps; ++i) iterate();
    for (Index k = 0; k < length; ++k) {
        check_finite(x, y, step);
        raw(k, 0) = x;
        raw(k, 1) = y;
        for (Index i = 0; i < p.subsample; ++i) iterate();
    }
    return raw;
}

Matrix sample_mackey_glass(const AttractorParams& p, Index length) {
    const double beta = constant(p, "beta", 0.2);
    const double gamma = constant(p, "gamma", 0.1);
    const double exponent = constant(p, "exponent", 10.0);
    const double tau = constant(p, "tau", 17.0);
    const double dt = p.step_size;
    const double u0 = p.initial_condition.empty() ? 1.2 : p.initial_condition[0];
    const double delay_steps = tau / dt;

    const Index total = p.transient_steps + p.subsample * length + 1;
    std::vector<double> u(static_cast<std::size_t>(total));
    u[0] = u0;

    // Linear interpolation into the stored series; times before t = 0 use the
    // constant history u0.
    const auto delayed = [&](Index step) {
        const double pos = static_cast<double>(step) - delay_steps;
        if (pos <= 0.0) return u0;
        const auto lo = static_cast<Index>(std::floor(pos));
        const double frac = pos - static_cast<double>(lo);
        if (lo + 1 >= total) return u[static_cast<std::size_t>(total - 1)];
        return (1.0 - frac) * u[static_cast<std::size_t>(lo)]
               + frac * u[static_cast<std::size_t>(lo + 1)];
    };

    for (Index step = 0; step + 1 < total; ++step) {
        const double u_tau = delayed(step);
        const double du = beta * u_tau / (1.0 + std::pow(u_tau, exponent))
                          - gamma * u[static_cast<std::size_t>(step)];
        u[static_cast<std::size_t>(step + 1)] = u[static_cast<std::size_t>(step)] + dt * du;
        if (!std::isfinite(u[static_cast<std::size_t>(step + 1)]))
            throw numeric_error("gen_attractor: divergent trajectory at integration step "
                                + std::to_string(step + 1));
    }

    Matrix raw(length, 2);
    for (Index k = 0; k < length; ++k) {
        const Index step = p.transient_steps + k * p.subsample;
        raw(k, 0) = u[static_cast<std::size_t>(step)];
        raw(k, 1) = delayed(step);
    }
    return raw;
}

void rescale_to_unit(Matrix& raw) {
    for (Index c = 0; c < raw.cols(); ++c) {
        const double lo = raw.col(c).minCoeff();
        const double hi = raw.col(c).maxCoeff();
        if (hi - lo <= 0.0)
            raw.col(c).setConstant(0.5);
        else
            raw.col(c) = ((raw.col(c).array() - lo) / (hi - lo)).matrix();
    }
}

}  // namespace

std::string to_string(AttractorSystem system) {
    switch (system) {
        case AttractorSystem::rossler: return "rossler";
        case AttractorSystem::lorenz: return "lorenz";
        case AttractorSystem::mackey_glass: return "mackey_glass";
        case AttractorSystem::henon: return "henon";
    }
    return "unknown";
}

AttractorParams AttractorParams::defaults(AttractorSystem system) {
    AttractorParams p;
    p.system = system;
    switch (system) {
        case AttractorSystem::rossler:
            p.step_size = 0.005;
            p.subsample = 150;
            p.transient_steps = 40000;
            p.initial_condition = {0.1, 0.0, 0.0};
            break;
        case AttractorSystem::lorenz:
            p.step_size = 0.005;
            p.subsample = 15;
            p.transient_steps = 6000;
            p.initial_condition = {1.0, 1.0, 1.0};
            break;
        case AttractorSystem::mackey_glass:
            p.step_size = 0.1;
            p.subsample = 3;
            p.transient_steps = 3000;
            p.initial_condition = {1.2};
            break;
        case AttractorSystem::henon:
            p.step_size = 1.0;
            p.subsample = 1;
            p.transient_steps = 1000;
            p.initial_condition = {0.0, 0.0};
            break;
    }
    return p;
}

Pattern gen_attractor(const AttractorParams& params, Index length) {
    if (params.step_size <= 0.0)
        throw std::invalid_argument("gen_attractor: step_size must be positive");
    if (params.subsample < 1)
        throw std::invalid_argument("gen_attractor: subsample must be >= 1");
    if (params.transient_steps < 0)
        throw std::invalid_argument("gen_attractor: transient_steps must be >= 0");
    if (length < 1) throw std::invalid_argument("gen_attractor: length must be >= 1");

    Matrix raw;
    switch (params.system) {
        case AttractorSystem::rossler: {
            const double a = constant(params, "a", 0.2);
            const double b = constant(params, "b", 0.2);
            const double c = constant(params, "c", 8.0);
            const Deriv3 f = [=](const std::array<double, 3>& s) {
                return std::array<double, 3>{-s[1] - s[2], s[0] + a * s[1],
                                             b + s[2] * (s[0] - c)};
            };
            std::array<double, 3> ic{0.1, 0.0, 0.0};
            for (std::size_t i = 0; i < params.initial_condition.size() && i < 3; ++i)
                ic[i] = params.initial_condition[i];
            raw = sample_flow(f, ic, params.step_size, params.transient_steps,
                              params.subsample, length);
            break;
        }
        case AttractorSystem::lorenz: {
            const double sigma = constant(params, "sigma", 10.0);
            const double rho = constant(params, "rho", 28.0);
            const double beta = constant(params, "beta", 8.0 / 3.0);
            const Deriv3 f = [=](const std::array<double, 3>& s) {
                return std::array<double, 3>{sigma * (s[1] - s[0]),
                                             s[0] * (rho - s[2]) - s[1],
                                             s[0] * s[1] - beta * s[2]};
            };
            std::array<double, 3> ic{1.0, 1.0, 1.0};
            for (std::size_t i = 0; i < params.initial_condition.size() && i < 3; ++i)
                ic[i] = params.initial_condition[i];
            raw = sample_flow(f, ic, params.step_size, params.transient_steps,
                              params.subsample, length);
            break;
        }
        case AttractorSystem::mackey_glass:
            raw = sample_mackey_glass(params, length);
            break;
        case AttractorSystem::henon:
            raw = sample_henon(params, length);
            break;
    }

    rescale_to_unit(raw);
    return Pattern{to_string(params.system), std::move(raw)};
}

}  // namespace clab
