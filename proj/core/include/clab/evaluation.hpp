#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "clab/types.hpp"

namespace clab {

/// Per-channel NRMSE summary in the Min/Max/Mean/Std table layout. Channels
/// with constant targets are excluded from the statistics and listed in
/// `skipped` (their per_channel entry is NaN).
struct NrmseReport {
    Vector per_channel;
    std::vector<Index> skipped;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
    std::optional<Index> shift;  // phase-alignment d, when one was applied
    Index compared_steps = 0;
};

double rmse(const Vector& observed, const Vector& target);

/// sqrt(mean squared error / Var(target)), population variance. 1 means the
/// observation is no better than the target's mean; 0.1 or lower counts as
/// good accuracy. Throws numeric_error for a constant target.
double nrmse(const Vector& observed, const Vector& target);

/// Searches the shift d in [1, d_max] minimizing
///   NRMSE(observed[d:K], target[1:K-d+1])   (1-based, K = min length)
/// and returns (d, minimal NRMSE), ties broken by the smallest d. The NRMSE
/// is computed over K-d+1 steps; callers should pick d_max larger than the
/// target's period.
std::pair<Index, double> phase_align(const Vector& observed, const Vector& target,
                                     Index d_max);

/// Column-wise NRMSE of two K x M matrices plus min/max/mean/std statistics.
NrmseReport nrmse_multichannel(const Matrix& observed, const Matrix& target);

/// NRMSE over the first k and the last k steps; both at or below 0.1 counts
/// as good and long-term stable. Matrix overload averages over channels.
std::pair<double, double> long_term_stability(const Vector& observed, const Vector& target,
                                              Index k);
std::pair<double, double> long_term_stability(const Matrix& observed, const Matrix& target,
                                              Index k);

}  // namespace clab
