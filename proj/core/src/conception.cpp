#include "clab/conception.hpp"

#include <cmath>

#include "clab/rng.hpp"

namespace clab {

namespace {

void check_aperture(double aperture) {
    if (!(aperture > 0.0) || !std::isfinite(aperture))
        throw std::invalid_argument("aperture must be finite and positive");
}

}  // namespace

ConceptionVector random_conception(Index n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("random_conception: n must be >= 1");
    Rng rng(seed);
    Vector w(n);
    for (Index i = 0; i < n; ++i) w(i) = rng.uniform01();
    return ConceptionVector{std::move(w), 1.0};
}

ConceptionVector compute_conception(const Matrix& states, double aperture) {
    check_aperture(aperture);
    if (states.cols() < 1)
        throw std::invalid_argument("compute_conception: at least one state column required");
    const double reg = 1.0 / (aperture * aperture);
    const Vector mean_sq = states.array().square().rowwise().mean().matrix();
    Vector w = (mean_sq.array() / (mean_sq.array() + reg)).matrix();
    return ConceptionVector{std::move(w), aperture};
}

Vector apply_conception(const ConceptionVector& c, const Vector& r) {
    if (c.size() != r.size())
        throw std::invalid_argument("apply_conception: dimension mismatch");
    return c.weights.cwiseProduct(r);
}

Vector diag_autoconceptor_step(const Vector& c, const Vector& z, const Vector& rates,
                               double aperture) {
    check_aperture(aperture);
    if (c.size() != z.size() || c.size() != rates.size())
        throw std::invalid_argument("diag_autoconceptor_step: dimension mismatch");
    if ((rates.array() <= 0.0).any())
        throw std::invalid_argument("diag_autoconceptor_step: rates must be > 0");
    const double reg = 1.0 / (aperture * aperture);
    return c.array()
           + rates.array() * ((1.0 - c.array()) * z.array().square() - reg * c.array());
}

FixedPoints fixed_points(double mean_r_sq, double aperture) {
    check_aperture(aperture);
    if (!(mean_r_sq > 0.0) || mean_r_sq > 1.0)
        throw std::invalid_argument("fixed_points: mean_r_sq must be in (0, 1]");
    FixedPoints fp;
    fp.discriminant = 1.0 - 4.0 / (aperture * aperture * mean_r_sq);
    if (fp.discriminant >= 0.0) {
        const double root = std::sqrt(fp.discriminant);
        fp.c_plus = 0.5 + 0.5 * root;
        fp.c_minus = 0.5 - 0.5 * root;
    }
    return fp;
}

Vector mix_conceptions(const std::vector<ConceptionVector>& cs,
                       const std::vector<double>& weights) {
    if (cs.empty() || cs.size() != weights.size())
        throw std::invalid_argument("mix_conceptions: need equally many vectors and weights");
    Vector out = weights[0] * cs[0].weights;
    for (std::size_t i = 1; i < cs.size(); ++i) {
        if (cs[i].size() != out.size())
            throw std::invalid_argument("mix_conceptions: dimension mismatch");
        out += weights[i] * cs[i].weights;
    }
    return out;
}

}  // namespace clab
