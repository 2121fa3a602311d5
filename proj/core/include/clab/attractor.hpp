#pragma once

#include <map>
#include <string>
#include <vector>

#include "clab/pattern.hpp"
#include "clab/types.hpp"

namespace clab {

enum class AttractorSystem { rossler, lorenz, mackey_glass, henon };

std::string to_string(AttractorSystem system);

/// Parameters for sampling a chaotic attractor. `constants` overrides the
/// named system constants (rossler: a, b, c; lorenz: sigma, rho, beta;
/// mackey_glass: beta, gamma, exponent, tau; henon: a, b).
struct AttractorParams {
    AttractorSystem system = AttractorSystem::rossler;
    double step_size = 0.005;
    Index subsample = 1;
    Index transient_steps = 1000;  // discarded integration steps
    std::vector<double> initial_condition;
    std::map<std::string, double> constants;

    /// Canonical per-system parameter set (step size, subsampling, transient
    /// length, initial condition).
    static AttractorParams defaults(AttractorSystem system);
};

/// Integrates the chosen system, discards the transient, subsamples,
/// projects to 2 channels (first two coordinates for flows, (u(t), u(t-tau))
/// for Mackey-Glass, (x, y) for Henon) and rescales each channel to [0, 1].
Pattern gen_attractor(const AttractorParams& params, Index length);

}  // namespace clab
