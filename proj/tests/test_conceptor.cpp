#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "clab/conceptor.hpp"
#include "clab/rng.hpp"

using namespace clab;

namespace {

Matrix random_states(Index n, Index l, std::uint64_t seed) {
    Rng rng(seed);
    Matrix z(n, l);
    for (Index r = 0; r < n; ++r)
        for (Index c = 0; c < l; ++c) z(r, c) = rng.normal() * 0.4;
    return z;
}

Matrix random_symmetric(Index n, std::uint64_t seed, double scale) {
    Rng rng(seed);
    Matrix m(n, n);
    for (Index r = 0; r < n; ++r)
        for (Index c = 0; c < n; ++c) m(r, c) = rng.normal() * scale;
    return (m + m.transpose()) / 2.0;
}

Vector sorted_eigenvalues(const Matrix& symmetric) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric, Eigen::EigenvaluesOnly);
    Vector v = es.eigenvalues();
    std::sort(v.data(), v.data() + v.size(), std::greater<double>());
    return v;
}

}  // namespace

TEST_SUITE("conceptor") {

TEST_CASE("correlation: unit column and orthogonal rows") {
    Matrix z = Matrix::Zero(3, 1);
    z(0, 0) = 1.0;
    const CorrelationMatrix r = correlation(z);
    Matrix expected = Matrix::Zero(3, 3);
    expected(0, 0) = 1.0;
    CHECK((r.m - expected).norm() == 0.0);
    CHECK(r.sample_count == 1);

    // rows of norm sqrt(L), mutually orthogonal -> R = I
    const Index l = 4;
    Matrix q(2, l);
    q << 1, 1, 1, 1, 1, -1, 1, -1;
    const CorrelationMatrix ri = correlation(q);
    CHECK((ri.m - Matrix::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("correlation matches the outer-product-sum oracle") {
    const Matrix z = random_states(3, 50, 17);
    const CorrelationMatrix r = correlation(z);
    Matrix sum = Matrix::Zero(3, 3);
    for (Index c = 0; c < z.cols(); ++c) sum += z.col(c) * z.col(c).transpose();
    sum /= 50.0;
    CHECK((r.m - sum).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("compute_conceptor: identity correlation at aperture 1 halves") {
    CorrelationMatrix r{Matrix::Identity(4, 4), 10};
    const Conceptor c = compute_conceptor(r, 1.0);
    CHECK((c.m - 0.5 * Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("compute_conceptor: null correlation gives the null conceptor") {
    CorrelationMatrix r{Matrix::Zero(5, 5), 10};
    for (double aperture : {0.5, 1.0, 100.0})
        CHECK(compute_conceptor(r, aperture).m.norm() == 0.0);
}

TEST_CASE("compute_conceptor: aperture limits are rejected, constructors cover them") {
    CorrelationMatrix r{Matrix::Identity(3, 3), 10};
    CHECK_THROWS_AS(compute_conceptor(r, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(compute_conceptor(r, -2.0), std::invalid_argument);
    CHECK_THROWS_AS(compute_conceptor(r, std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
    CHECK(Conceptor::zero(3).m.norm() == 0.0);
    CHECK((Conceptor::identity(3).m - Matrix::Identity(3, 3)).norm() == 0.0);
}

TEST_CASE("singular value law s = sigma / (sigma + aperture^-2) against an SVD oracle") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull}) {
        const Matrix z = random_states(6, 40, seed);
        const CorrelationMatrix r = correlation(z);
        for (double aperture : {0.5, 2.0, 10.0}) {
            const Conceptor c = compute_conceptor(r, aperture);
            CHECK((c.m - c.m.transpose()).cwiseAbs().maxCoeff() < 1e-10);
            const Vector sigma = sorted_eigenvalues(r.m);
            const Vector s = sorted_eigenvalues(c.m);
            for (Index i = 0; i < s.size(); ++i) {
                const double predicted =
                    sigma(i) / (sigma(i) + 1.0 / (aperture * aperture));
                CHECK(std::abs(s(i) - predicted) < 1e-9);
                CHECK(s(i) >= 0.0);
                CHECK(s(i) <= 1.0);
            }
        }
    }
}

TEST_CASE("aperture monotonicity of the singular values") {
    const CorrelationMatrix r = correlation(random_states(5, 60, 9));
    Vector prev = sorted_eigenvalues(compute_conceptor(r, 1.0).m);
    for (double aperture : {2.0, 4.0, 8.0}) {
        const Vector next = sorted_eigenvalues(compute_conceptor(r, aperture).m);
        for (Index i = 0; i < prev.size(); ++i) CHECK(next(i) >= prev(i) - 1e-12);
        prev = next;
    }
}

TEST_CASE("conceptor and correlation share eigenvectors") {
    // Spectrum with well-separated eigenvalues so eigenvectors are unique up
    // to sign.
    Rng rng(21);
    Matrix base(5, 5);
    for (Index r = 0; r < 5; ++r)
        for (Index c = 0; c < 5; ++c) base(r, c) = rng.normal();
    const Matrix q = Eigen::HouseholderQR<Matrix>(base).householderQ();
    Vector diag(5);
    diag << 2.0, 1.0, 0.5, 0.2, 0.05;
    const Matrix r_m = q * diag.asDiagonal() * q.transpose();
    const Conceptor c = compute_conceptor(CorrelationMatrix{r_m, 100}, 1.5);

    Eigen::SelfAdjointEigenSolver<Matrix> er(r_m);
    Eigen::SelfAdjointEigenSolver<Matrix> ec(c.m);
    // Both solvers sort ascending; map to each other with sign fixes.
    for (Index i = 0; i < 5; ++i) {
        Vector vr = er.eigenvectors().col(i);
        Vector vc = ec.eigenvectors().col(i);
        if (vr.dot(vc) < 0.0) vc = -vc;
        CHECK((vr - vc).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("conceptor_loss: identity and null conceptors") {
    const Matrix z = random_states(4, 30, 5);
    const double aperture = 2.0;
    CHECK(conceptor_loss(Matrix::Identity(4, 4), z, aperture)
          == doctest::Approx(4.0 / (aperture * aperture)).epsilon(1e-12));
    const double mean_sq = z.colwise().squaredNorm().mean();
    CHECK(conceptor_loss(Matrix::Zero(4, 4), z, aperture)
          == doctest::Approx(mean_sq).epsilon(1e-12));
}

TEST_CASE("closed form minimizes the loss under random perturbations") {
    const Matrix z = random_states(4, 50, 11);
    const CorrelationMatrix r = correlation(z);
    const double aperture = 1.7;
    const Conceptor c = compute_conceptor(r, aperture);
    const double best = conceptor_loss(c.m, z, aperture);
    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        Matrix eps(4, 4);
        for (Index i = 0; i < 4; ++i)
            for (Index j = 0; j < 4; ++j) eps(i, j) = rng.normal();
        eps *= 1e-3 / eps.norm();
        CHECK(conceptor_loss(c.m + eps, z, aperture) >= best - 1e-15);
    }
}

TEST_CASE("loss_gradient: stationarity at the closed form, -2R at zero") {
    const Matrix z = random_states(5, 80, 13);
    const CorrelationMatrix r = correlation(z);
    const Conceptor c = compute_conceptor(r, 3.0);
    CHECK(loss_gradient(c.m, r, 3.0).norm() < 1e-9);
    CHECK((loss_gradient(Matrix::Zero(5, 5), r, 3.0) + 2.0 * r.m).cwiseAbs().maxCoeff()
          < 1e-12);
}

TEST_CASE("loss_gradient matches central finite differences of the loss") {
    const Matrix z = random_states(4, 60, 19);
    const CorrelationMatrix r = correlation(z);
    const double aperture = 1.3;
    const Matrix c = random_symmetric(4, 31, 0.3);
    const Matrix grad = loss_gradient(c, r, aperture);
    const double h = 1e-6;
    Matrix fd(4, 4);
    for (Index i = 0; i < 4; ++i) {
        for (Index j = 0; j < 4; ++j) {
            Matrix cp = c, cm = c;
            cp(i, j) += h;
            cm(i, j) -= h;
            fd(i, j) = (conceptor_loss(cp, z, aperture) - conceptor_loss(cm, z, aperture))
                       / (2.0 * h);
        }
    }
    CHECK((grad - fd).norm() / grad.norm() < 1e-5);
}

TEST_CASE("autoconceptor_step: degenerate cases") {
    const Matrix c = random_symmetric(3, 8, 0.2);
    // zero state and effectively infinite aperture: no drive, no decay
    const Matrix next = autoconceptor_step(c, Vector::Zero(3), 0.1, 1e9);
    CHECK((next - c).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(autoconceptor_step(c, Vector::Zero(3), 0.0, 1.0),
                    std::invalid_argument);
}

TEST_CASE("autoconceptor converges to the closed form for a repeated state") {
    // 1-D case: fixed z, so R = z^2 and the fixed point is z^2/(z^2 + a^-2).
    const double z_val = 0.8, aperture = 2.0, rate = 1e-3;
    Matrix c = Matrix::Zero(1, 1);
    const Vector z = Vector::Constant(1, z_val);
    for (int i = 0; i < 100000; ++i) c = autoconceptor_step(c, z, rate, aperture);
    const double expected = z_val * z_val / (z_val * z_val + 0.25);
    CHECK(c(0, 0) == doctest::Approx(expected).epsilon(1e-3));
}

TEST_CASE("mix_conceptors: endpoint and blend weights") {
    const Conceptor a{0.2 * Matrix::Identity(3, 3), 1.0};
    const Conceptor b{0.6 * Matrix::Identity(3, 3), 1.0};
    CHECK((mix_conceptors({a, b}, {1.0, 0.0}) - a.m).norm() == 0.0);
    CHECK((mix_conceptors({a, b}, {0.0, 1.0}) - b.m).norm() == 0.0);
    CHECK((mix_conceptors({a, b}, {0.5, 0.5}) - 0.4 * Matrix::Identity(3, 3)).norm()
          < 1e-15);
    const Conceptor wrong{Matrix::Identity(2, 2), 1.0};
    CHECK_THROWS_AS(mix_conceptors({a, wrong}, {0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(mix_conceptors({a, b}, {0.5}), std::invalid_argument);
}

}  // TEST_SUITE
