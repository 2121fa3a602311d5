#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "clab/types.hpp"

namespace clab {

/// Diagonal conceptor: an N-vector of per-neuron scaling weights. Weights
/// produced by compute_conception lie in [0, 1); random initial vectors lie
/// in [0, 1]. Applied element-wise, so storage and application are O(N).
struct ConceptionVector {
    Vector weights;
    double aperture = 1.0;

    Index size() const { return weights.size(); }
};

/// Nonzero fixed points of the scalar adaptation dynamics (see
/// fixed_points). c_plus and c_minus are absent when the discriminant is
/// negative; the zero fixed point always exists.
struct FixedPoints {
    std::optional<double> c_plus;
    std::optional<double> c_minus;
    double zero = 0.0;
    double discriminant = 0.0;
};

/// I.i.d. uniform [0, 1] weights; deterministic per seed. Used as the
/// random initial scaling inserted in the update loop before training.
ConceptionVector random_conception(Index n, std::uint64_t seed);

/// Closed-form minimizer of the element-wise loss:
///   c_i = m_i / (m_i + aperture^-2),  m_i = row mean of states .* states.
ConceptionVector compute_conception(const Matrix& states, double aperture);

/// Element-wise product c .* r (equals diag(c) * r at O(N) cost).
Vector apply_conception(const ConceptionVector& c, const Vector& r);

/// One per-neuron adaptation step with individual learning rates:
///   c_i' = c_i + rate_i * ((1 - c_i) z_i^2 - aperture^-2 c_i).
/// Purely local: neuron i uses only z_i and c_i.
Vector diag_autoconceptor_step(const Vector& c, const Vector& z, const Vector& rates,
                               double aperture);

/// Fixed points of the continuous-time adaptation dynamics at constant
/// neuron excitation E[r^2]:
///   c_pm = 1/2 +- 1/2 sqrt(1 - 4 aperture^-2 / mean_r_sq).
/// Only c_plus and 0 are stable.
FixedPoints fixed_points(double mean_r_sq, double aperture);

/// Weighted element-wise sum of conception vectors for morphing
/// (interpolation only is exercised by the experiments).
Vector mix_conceptions(const std::vector<ConceptionVector>& cs,
                       const std::vector<double>& weights);

}  // namespace clab
