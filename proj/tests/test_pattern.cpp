#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "clab/attractor.hpp"
#include "clab/pattern.hpp"
#include "clab/serialization.hpp"
#include "oracles.hpp"

using namespace clab;

namespace {

std::filesystem::path temp_csv(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_SUITE("patterns") {

TEST_CASE("gen_sine: quarter-period samples") {
    const Pattern p = gen_sine(4.0, 4);
    CHECK(p.data(0, 0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.data(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(p.data(2, 0)) < 1e-12);
    CHECK(p.data(3, 0) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("gen_sine: bounded in [-1, 1], length and validation") {
    const Pattern p = gen_sine(8.8342522, 5000);
    CHECK(p.length() == 5000);
    CHECK(p.channels() == 1);
    CHECK(p.data.maxCoeff() <= 1.0);
    CHECK(p.data.minCoeff() >= -1.0);
    CHECK_THROWS_AS(gen_sine(0.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(gen_sine(5.0, 0), std::invalid_argument);
}

TEST_CASE("gen_periodic_random: exact integer periodicity") {
    const Pattern p = gen_periodic_random(5, 47, 9);
    for (Index n = 0; n + 5 < p.length(); ++n)
        CHECK(p.data(n, 0) == p.data(n + 5, 0));
}

TEST_CASE("gen_periodic_random: deterministic per seed") {
    const Pattern a = gen_periodic_random(5, 30, 42);
    const Pattern b = gen_periodic_random(5, 30, 42);
    CHECK(a.data == b.data);
    const Pattern c = gen_periodic_random(5, 30, 43);
    CHECK(a.data != c.data);
}

TEST_CASE("gen_periodic_random: perturbation stays within its amplitude") {
    const Pattern base = gen_periodic_random(5, 25, 7, 0.0);
    const Pattern var = gen_periodic_random(5, 25, 7, 0.1);
    CHECK((base.data - var.data).cwiseAbs().maxCoeff() <= 0.1);
    CHECK(var.data.maxCoeff() <= 1.0);
    CHECK(var.data.minCoeff() >= -1.0);
    CHECK((base.data - var.data).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("delay_embed: pairs, length arithmetic, constant signal") {
    Pattern p{"p", Matrix::Zero(3, 1)};
    p.data << 1, 2, 3;
    const Pattern e = delay_embed(p, 0, 1);
    CHECK(e.length() == 2);
    CHECK(e.channels() == 2);
    CHECK(e.data(0, 0) == 1.0);
    CHECK(e.data(0, 1) == 2.0);
    CHECK(e.data(1, 0) == 2.0);
    CHECK(e.data(1, 1) == 3.0);

    Pattern c{"c", Matrix::Constant(10, 1, 0.4)};
    const Pattern ce = delay_embed(c, 0, 3);
    CHECK(ce.length() == 7);
    for (Index n = 0; n < ce.length(); ++n) {
        CHECK(ce.data(n, 0) == 0.4);
        CHECK(ce.data(n, 1) == 0.4);
    }
    CHECK_THROWS_AS(delay_embed(p, 0, 3), std::invalid_argument);
    CHECK_THROWS_AS(delay_embed(p, 1, 1), std::invalid_argument);
}

TEST_CASE("attractors map into the unit square") {
    for (const auto system : {AttractorSystem::rossler, AttractorSystem::lorenz,
                              AttractorSystem::mackey_glass, AttractorSystem::henon}) {
        const Pattern p = gen_attractor(AttractorParams::defaults(system), 300);
        CHECK(p.length() == 300);
        CHECK(p.channels() == 2);
        CHECK(p.data.minCoeff() >= 0.0);
        CHECK(p.data.maxCoeff() <= 1.0);
        CHECK(p.data.allFinite());
    }
}

TEST_CASE("henon matches a direct map iteration oracle") {
    auto params = AttractorParams::defaults(AttractorSystem::henon);
    const Index length = 1500;
    const Pattern p = gen_attractor(params, length);

    Matrix raw = oracles::henon_reference(1.4, 0.3, params.transient_steps, length);
    for (Index c = 0; c < 2; ++c) {
        const double lo = raw.col(c).minCoeff();
        const double hi = raw.col(c).maxCoeff();
        raw.col(c) = ((raw.col(c).array() - lo) / (hi - lo)).matrix();
    }
    CHECK((p.data - raw).cwiseAbs().maxCoeff() < 1e-12);

    // bounded, non-constant orbit
    for (Index c = 0; c < 2; ++c) {
        const double mean = p.data.col(c).mean();
        CHECK((p.data.col(c).array() - mean).square().mean() > 0.01);
    }
}

TEST_CASE("lorenz matches an independent RK4 oracle and does not collapse") {
    auto params = AttractorParams::defaults(AttractorSystem::lorenz);
    const Pattern p = gen_attractor(params, 500);

    Matrix raw = oracles::lorenz_reference(10.0, 28.0, 8.0 / 3.0, params.step_size,
                                           params.transient_steps, params.subsample, 500,
                                           1.0, 1.0, 1.0);
    for (Index c = 0; c < 2; ++c) {
        const double lo = raw.col(c).minCoeff();
        const double hi = raw.col(c).maxCoeff();
        raw.col(c) = ((raw.col(c).array() - lo) / (hi - lo)).matrix();
    }
    CHECK((p.data - raw).cwiseAbs().maxCoeff() < 1e-9);
    for (Index c = 0; c < 2; ++c) {
        const double mean = p.data.col(c).mean();
        CHECK((p.data.col(c).array() - mean).square().mean() > 0.01);
    }
}

TEST_CASE("attractor validation and divergence reporting") {
    auto params = AttractorParams::defaults(AttractorSystem::lorenz);
    params.step_size = 0.0;
    CHECK_THROWS_AS(gen_attractor(params, 10), std::invalid_argument);

    params = AttractorParams::defaults(AttractorSystem::henon);
    params.initial_condition = {50.0, 50.0};  // far outside the basin
    params.transient_steps = 0;
    CHECK_THROWS_AS(gen_attractor(params, 10), numeric_error);
}

TEST_CASE("load_csv: verbatim ingestion") {
    const auto path = temp_csv("clab_plain.csv", "0.5,-0.25\n-1,1\n0,0.125\n");
    const Pattern p = load_csv(path, false, 0);
    CHECK(p.length() == 3);
    CHECK(p.channels() == 2);
    CHECK(p.data(0, 0) == 0.5);
    CHECK(p.data(0, 1) == -0.25);
    CHECK(p.data(2, 1) == 0.125);
}

TEST_CASE("load_csv: header auto-detection") {
    const auto path = temp_csv("clab_header.csv", "left,right\n1,2\n3,4\n");
    const Pattern p = load_csv(path, false, 0);
    CHECK(p.length() == 2);
    CHECK(p.data(0, 0) == 1.0);
}

TEST_CASE("load_csv: normalization maps min/max to [-1, 1], constants to 0") {
    const auto path = temp_csv("clab_norm.csv", "0,5\n10,5\n5,5\n");
    const Pattern p = load_csv(path, true, 0);
    CHECK(p.data(0, 0) == doctest::Approx(-1.0));
    CHECK(p.data(1, 0) == doctest::Approx(1.0));
    CHECK(p.data(2, 0) == doctest::Approx(0.0));
    CHECK(p.data.col(1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("load_csv: smoothing is a centered moving average") {
    const auto path = temp_csv("clab_smooth.csv", "0\n3\n0\n3\n0\n");
    const Pattern p = load_csv(path, false, 3);
    CHECK(p.data(1, 0) == doctest::Approx(1.0));
    CHECK(p.data(2, 0) == doctest::Approx(2.0));
    CHECK(p.data(0, 0) == doctest::Approx(1.5));  // edge window shrinks to 2 samples
}

TEST_CASE("load_csv: error reporting with row/column position") {
    const auto ragged = temp_csv("clab_ragged.csv", "1,2\n3\n");
    CHECK_THROWS_AS(load_csv(ragged), parse_error);
    try {
        load_csv(ragged);
    } catch (const parse_error& e) {
        CHECK(e.row == 2);
    }

    const auto bad = temp_csv("clab_bad.csv", "1,2\n3,oops\n");
    CHECK_THROWS_AS(load_csv(bad), parse_error);
    try {
        load_csv(bad);
    } catch (const parse_error& e) {
        CHECK(e.row == 2);
        CHECK(e.column == 2);
    }

    const auto empty = temp_csv("clab_empty.csv", "");
    CHECK_THROWS_AS(load_csv(empty), parse_error);
    CHECK_THROWS_AS(load_csv("/nonexistent/file.csv"), parse_error);
}

TEST_CASE("load_csv re-ingests a serialized pattern bit-exactly") {
    const Pattern p = gen_periodic_random(7, 40, 77);
    const auto path = std::filesystem::temp_directory_path() / "clab_roundtrip.csv";
    std::ofstream out(path);
    for (Index r = 0; r < p.length(); ++r) out << format_double(p.data(r, 0)) << '\n';
    out.close();
    const Pattern back = load_csv(path, false, 0);
    CHECK(back.data == p.data);
}

}  // TEST_SUITE
