#pragma once

#include <vector>

#include "clab/types.hpp"

namespace clab {

/// State correlation matrix R = Z Z^T / L of a collection of states.
struct CorrelationMatrix {
    Matrix m;  // N x N, symmetric PSD
    Index sample_count = 0;
};

/// Full-matrix conceptor: a symmetric N x N matrix with singular values in
/// [0, 1] that soft-projects reservoir states onto the subspace occupied by
/// one stored pattern, together with the aperture it was computed at.
struct Conceptor {
    Matrix m;
    double aperture = 1.0;

    /// The aperture -> 0 limit (suppresses everything).
    static Conceptor zero(Index n);
    /// The aperture -> infinity limit (passes everything).
    static Conceptor identity(Index n);
};

/// R = states * states^T / L.
CorrelationMatrix correlation(const Matrix& states);

/// Closed-form minimizer of the conceptor loss, C = R (R + aperture^-2 I)^-1.
/// C shares R's eigenvectors; its singular values are s = sigma / (sigma +
/// aperture^-2). Apertures 0 and infinity are rejected; use the zero /
/// identity constructors for the limits. The result is symmetrized to
/// suppress numerical drift.
Conceptor compute_conceptor(const CorrelationMatrix& r, double aperture);

/// Mean over state columns of ||z - C z||^2 plus aperture^-2 ||C||_fro^2.
double conceptor_loss(const Matrix& c, const Matrix& states, double aperture);

/// Gradient of the conceptor loss with respect to C:
///   -2 (I - C) R + 2 aperture^-2 C.
/// Zero at the closed-form solution.
Matrix loss_gradient(const Matrix& c, const CorrelationMatrix& r, double aperture);

/// One stochastic-gradient adaptation step while the reservoir runs:
///   C' = C + rate * ((I - C) z z^T - aperture^-2 C).
Matrix autoconceptor_step(const Matrix& c, const Vector& z, double rate, double aperture);

/// Weighted sum of conceptor matrices for morphing. Weights are
/// unrestricted (extrapolation allowed); the result is a plain matrix and
/// not necessarily a valid conceptor.
Matrix mix_conceptors(const std::vector<Conceptor>& cs, const std::vector<double>& weights);

}  // namespace clab
