#include "clab/conceptor.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>

namespace clab {

namespace {

void check_aperture(double aperture) {
    if (!(aperture > 0.0) || !std::isfinite(aperture))
        throw std::invalid_argument("aperture must be finite and positive; use the zero/"
                                    "identity constructors for the limits");
}

}  // namespace

Conceptor Conceptor::zero(Index n) { return Conceptor{Matrix::Zero(n, n), 0.0}; }

Conceptor Conceptor::identity(Index n) {
    return Conceptor{Matrix::Identity(n, n), std::numeric_limits<double>::infinity()};
}

CorrelationMatrix correlation(const Matrix& states) {
    if (states.cols() < 1)
        throw std::invalid_argument("correlation: at least one state column required");
    const double l = static_cast<double>(states.cols());
    Matrix r = states * states.transpose() / l;
    r = ((r + r.transpose()) / 2.0).eval();
    return CorrelationMatrix{std::move(r), states.cols()};
}

Conceptor compute_conceptor(const CorrelationMatrix& r, double aperture) {
    check_aperture(aperture);
    const Index n = r.m.rows();
    const double reg = 1.0 / (aperture * aperture);
    // (R + a^-2 I) C = R, solved by Cholesky; R and (R + a^-2 I)^-1 commute,
    // so C is R (R + a^-2 I)^-1 as well.
    Matrix lhs = r.m + reg * Matrix::Identity(n, n);
    Eigen::LLT<Matrix> llt(lhs);
    if (llt.info() != Eigen::Success)
        throw numeric_error("compute_conceptor: factorization of R + aperture^-2 I failed");
    Matrix c = llt.solve(r.m);
    c = ((c + c.transpose()) / 2.0).eval();
    return Conceptor{std::move(c), aperture};
}

double conceptor_loss(const Matrix& c, const Matrix& states, double aperture) {
    check_aperture(aperture);
    if (c.rows() != c.cols() || c.rows() != states.rows())
        throw std::invalid_argument("conceptor_loss: dimension mismatch");
    const double l = static_cast<double>(states.cols());
    const double data_term = (states - c * states).squaredNorm() / l;
    return data_term + c.squaredNorm() / (aperture * aperture);
}

Matrix loss_gradient(const Matrix& c, const CorrelationMatrix& r, double aperture) {
    check_aperture(aperture);
    if (c.rows() != r.m.rows() || c.cols() != r.m.cols())
        throw std::invalid_argument("loss_gradient: dimension mismatch");
    const Index n = c.rows();
    return -2.0 * (Matrix::Identity(n, n) - c) * r.m + 2.0 / (aperture * aperture) * c;
}

Matrix autoconceptor_step(const Matrix& c, const Vector& z, double rate, double aperture) {
    check_aperture(aperture);
    if (rate <= 0.0) throw std::invalid_argument("autoconceptor_step: rate must be > 0");
    if (c.rows() != c.cols() || c.rows() != z.size())
        throw std::invalid_argument("autoconceptor_step: dimension mismatch");
    const Index n = c.rows();
    return c + rate * ((Matrix::Identity(n, n) - c) * (z * z.transpose())
                       - c / (aperture * aperture));
}

Matrix mix_conceptors(const std::vector<Conceptor>& cs, const std::vector<double>& weights) {
    if (cs.empty() || cs.size() != weights.size())
        throw std::invalid_argument("mix_conceptors: need equally many conceptors and "
                                    "weights");
    Matrix out = weights[0] * cs[0].m;
    for (std::size_t i = 1; i < cs.size(); ++i) {
        if (cs[i].m.rows() != out.rows() || cs[i].m.cols() != out.cols())
            throw std::invalid_argument("mix_conceptors: dimension mismatch");
        out += weights[i] * cs[i].m;
    }
    return out;
}

}  // namespace clab
