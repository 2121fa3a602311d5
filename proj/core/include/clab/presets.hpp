#pragma once

#include <string>
#include <vector>

#include "clab/experiment.hpp"

namespace clab {

/// Names of the built-in experiment presets.
std::vector<std::string> preset_names();

/// Returns the ready-to-run configuration for a built-in preset; throws
/// config_error for unknown names. The human-motion presets expect
/// user-supplied CSV files under mocap_csv/ (see README).
ExperimentConfig make_preset(const std::string& name);

/// Deterministic 10-channel test suite of mixed sines and transients, used
/// by the multichannel-synthetic preset.
Pattern gen_mixed_multichannel(Index channels, Index length, std::uint64_t seed,
                               Index variant);

}  // namespace clab
