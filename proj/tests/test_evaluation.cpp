#include <doctest.h>

#include <cmath>

#include "clab/evaluation.hpp"
#include "clab/pattern.hpp"
#include "clab/rng.hpp"

using namespace clab;

TEST_SUITE("evaluation") {

TEST_CASE("nrmse: perfect match, mean-valued observation, hand arithmetic") {
    Vector t(4);
    t << 0.1, 0.5, -0.3, 0.9;
    CHECK(nrmse(t, t) == 0.0);

    const Vector mean_obs = Vector::Constant(4, t.mean());
    CHECK(nrmse(mean_obs, t) == doctest::Approx(1.0).epsilon(1e-12));

    // target [0, 2], observed [1, 1]: mean squared error 1, population
    // variance 1.
    Vector tgt(2), obs(2);
    tgt << 0, 2;
    obs << 1, 1;
    CHECK(nrmse(obs, tgt) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("nrmse: zero-variance target is an error") {
    const Vector t = Vector::Constant(5, 0.7);
    const Vector o = Vector::Zero(5);
    CHECK_THROWS_AS(nrmse(o, t), numeric_error);
}

TEST_CASE("nrmse equals rmse normalized by the target deviation") {
    Rng rng(4);
    Vector t(50), o(50);
    for (Index i = 0; i < 50; ++i) {
        t(i) = rng.normal();
        o(i) = t(i) + 0.1 * rng.normal();
    }
    const double mean = t.mean();
    const double var = (t.array() - mean).square().mean();
    CHECK(nrmse(o, t) == doctest::Approx(rmse(o, t) / std::sqrt(var)).epsilon(1e-14));
}

TEST_CASE("nrmse is scale-covariant") {
    Rng rng(9);
    Vector t(40), o(40);
    for (Index i = 0; i < 40; ++i) {
        t(i) = rng.normal();
        o(i) = rng.normal();
    }
    const double base = nrmse(o, t);
    CHECK(nrmse(Vector(3.7 * o), Vector(3.7 * t)) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("phase_align: identical signals pick d = 1 with zero error") {
    const Pattern p = gen_sine(8.83, 200);
    const auto [d, err] = phase_align(p.data.col(0), p.data.col(0), 20);
    CHECK(d == 1);
    CHECK(err == 0.0);
}

TEST_CASE("phase_align: exact shift recovery") {
    const Pattern p = gen_sine(8.83, 200);
    const Vector target = p.data.col(0);
    // observed(n) = target(n - 3)
    Vector observed(200);
    for (Index n = 0; n < 200; ++n)
        observed(n) = n >= 3 ? target(n - 3) : std::sin(2.0 * 3.14159265358979323846
                                                        * (double(n) - 3.0) / 8.83);
    const auto [d, err] = phase_align(observed, target, 10);
    CHECK(d == 4);
    CHECK(err < 1e-10);
}

TEST_CASE("phase_align: opposite-phase sine aligns at half a period") {
    const Index period = 20;
    const Index len = 400;
    Vector target(len), observed(len);
    for (Index n = 0; n < len; ++n) {
        const double w = 2.0 * 3.14159265358979323846 / double(period);
        target(n) = std::sin(w * double(n));
        observed(n) = std::sin(w * double(n) + 3.14159265358979323846);
    }
    const auto [d, err] = phase_align(observed, target, 40);
    // shift d-1 must be half a period up to whole periods
    CHECK((d - 1) % period == period / 2);
    CHECK(err < 1e-10);
}

TEST_CASE("phase_align: aligned error never exceeds the unshifted error") {
    Rng rng(31);
    Vector t(150), o(150);
    for (Index i = 0; i < 150; ++i) {
        t(i) = std::sin(0.41 * double(i));
        o(i) = std::sin(0.41 * double(i) + 0.9) + 0.05 * rng.normal();
    }
    const double unshifted = nrmse(o, t);
    const auto [d, err] = phase_align(o, t, 30);
    (void)d;
    CHECK(err <= unshifted + 1e-15);
}

TEST_CASE("phase_align: validation") {
    const Vector t = Vector::LinSpaced(10, 0.0, 1.0);
    CHECK_THROWS_AS(phase_align(t, t, 0), std::invalid_argument);
    const Vector constant = Vector::Constant(10, 1.0);
    CHECK_THROWS_AS(phase_align(t, constant, 5), numeric_error);
}

TEST_CASE("nrmse_multichannel: zeros for a perfect match, composition of scalar cases") {
    Rng rng(8);
    Matrix t(30, 2);
    for (Index r = 0; r < 30; ++r)
        for (Index c = 0; c < 2; ++c) t(r, c) = rng.normal();
    const NrmseReport perfect = nrmse_multichannel(t, t);
    CHECK(perfect.mean == 0.0);
    CHECK(perfect.stddev == 0.0);
    CHECK(perfect.skipped.empty());

    // one perfect channel, one mean-valued channel
    Matrix obs = t;
    obs.col(1).setConstant(t.col(1).mean());
    const NrmseReport mixed = nrmse_multichannel(obs, t);
    CHECK(mixed.per_channel(0) == 0.0);
    CHECK(mixed.per_channel(1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mixed.mean == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mixed.min == 0.0);
    CHECK(mixed.max == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("nrmse_multichannel: constant channels are flagged and excluded") {
    Rng rng(12);
    Matrix t(20, 3);
    for (Index r = 0; r < 20; ++r) {
        t(r, 0) = rng.normal();
        t(r, 1) = 5.0;  // constant target channel
        t(r, 2) = rng.normal();
    }
    const NrmseReport rep = nrmse_multichannel(t, t);
    REQUIRE(rep.skipped.size() == 1);
    CHECK(rep.skipped[0] == 1);
    CHECK(std::isnan(rep.per_channel(1)));
    CHECK(rep.mean == 0.0);

    const Matrix all_const = Matrix::Constant(20, 2, 1.0);
    CHECK_THROWS_AS(nrmse_multichannel(all_const, all_const), numeric_error);
}

TEST_CASE("nrmse_multichannel: stats recomputable from per_channel") {
    Rng rng(44);
    Matrix t(60, 4), o(60, 4);
    for (Index r = 0; r < 60; ++r)
        for (Index c = 0; c < 4; ++c) {
            t(r, c) = rng.normal();
            o(r, c) = t(r, c) + 0.2 * rng.normal();
        }
    const NrmseReport rep = nrmse_multichannel(o, t);
    const double mean = rep.per_channel.mean();
    CHECK(rep.mean == doctest::Approx(mean).epsilon(1e-14));
    const double var = (rep.per_channel.array() - mean).square().mean();
    CHECK(rep.stddev == doctest::Approx(std::sqrt(var)).epsilon(1e-12));
    CHECK(rep.min == rep.per_channel.minCoeff());
    CHECK(rep.max == rep.per_channel.maxCoeff());
}

TEST_CASE("long_term_stability: perfect match and tail drift") {
    const Pattern p = gen_sine(8.83, 600);
    const Vector signal = p.data.col(0);
    const auto [f0, l0] = long_term_stability(signal, signal, 200);
    CHECK(f0 == 0.0);
    CHECK(l0 == 0.0);

    // drift only in the tail: first window clean, last window flagged
    Vector drifted = signal;
    for (Index n = 400; n < 600; ++n)
        drifted(n) += 0.5 * double(n - 400) / 200.0;
    const auto [f1, l1] = long_term_stability(drifted, signal, 200);
    CHECK(f1 <= 0.1);
    CHECK(l1 > 0.1);

    CHECK_THROWS_AS(long_term_stability(drifted, signal, 0), std::invalid_argument);
    CHECK_THROWS_AS(long_term_stability(drifted, signal, 601), std::invalid_argument);
}

TEST_CASE("long_term_stability: matrix overload averages channels") {
    Rng rng(5);
    Matrix t(300, 2), o(300, 2);
    for (Index r = 0; r < 300; ++r)
        for (Index c = 0; c < 2; ++c) {
            t(r, c) = rng.normal();
            o(r, c) = t(r, c) + 0.05 * rng.normal();
        }
    const auto [first, last] = long_term_stability(o, t, 100);
    CHECK(first > 0.0);
    CHECK(last > 0.0);
    CHECK(first < 0.2);
    CHECK(last < 0.2);
}

}  // TEST_SUITE
