// Microbenchmarks for the hot paths: the driven update, filter application
// (element-wise conception vector vs full conceptor matrix) and the two
// closed-form computations.

#include <benchmark/benchmark.h>

#include "clab/conceptor.hpp"
#include "clab/conception.hpp"
#include "clab/loading.hpp"
#include "clab/pattern.hpp"
#include "clab/reservoir.hpp"
#include "clab/rng.hpp"

using namespace clab;

namespace {

Reservoir make_reservoir(Index n) {
    ReservoirConfig cfg;
    cfg.n_neurons = n;
    cfg.n_inputs = 1;
    cfg.bias_scaling = 0.2;
    cfg.seed = 1;
    return init_reservoir(cfg);
}

Matrix make_states(Index n, Index l) {
    Rng rng(2);
    Matrix z(n, l);
    for (Index r = 0; r < n; ++r)
        for (Index c = 0; c < l; ++c) z(r, c) = rng.uniform(-0.8, 0.8);
    return z;
}

}  // namespace

static void BM_DriveStep(benchmark::State& state) {
    const Index n = state.range(0);
    const Reservoir res = make_reservoir(n);
    Vector x = Vector::Constant(n, 0.1);
    const Vector p = Vector::Constant(1, 0.5);
    for (auto _ : state) {
        x = drive_step(res, x, p);
        benchmark::DoNotOptimize(x.data());
    }
}
BENCHMARK(BM_DriveStep)->Arg(100)->Arg(500)->Arg(1000);

static void BM_ApplyConception(benchmark::State& state) {
    const Index n = state.range(0);
    const ConceptionVector c = random_conception(n, 3);
    Rng rng(4);
    Vector r(n);
    for (Index i = 0; i < n; ++i) r(i) = rng.uniform(-1.0, 1.0);
    for (auto _ : state) {
        Vector z = apply_conception(c, r);
        benchmark::DoNotOptimize(z.data());
    }
}
BENCHMARK(BM_ApplyConception)->Arg(100)->Arg(500)->Arg(1000)->Arg(5000);

static void BM_ApplyConceptorMatrix(benchmark::State& state) {
    const Index n = state.range(0);
    const Conceptor c = compute_conceptor(correlation(make_states(n, 2 * n)), 10.0);
    Rng rng(4);
    Vector r(n);
    for (Index i = 0; i < n; ++i) r(i) = rng.uniform(-1.0, 1.0);
    for (auto _ : state) {
        Vector z = c.m * r;
        benchmark::DoNotOptimize(z.data());
    }
}
BENCHMARK(BM_ApplyConceptorMatrix)->Arg(100)->Arg(500)->Arg(1000)->Arg(5000);

static void BM_ComputeConceptor(benchmark::State& state) {
    const Index n = state.range(0);
    const CorrelationMatrix r = correlation(make_states(n, 2 * n));
    for (auto _ : state) {
        Conceptor c = compute_conceptor(r, 10.0);
        benchmark::DoNotOptimize(c.m.data());
    }
}
BENCHMARK(BM_ComputeConceptor)->Arg(100)->Arg(500);

static void BM_ComputeConception(benchmark::State& state) {
    const Index n = state.range(0);
    const Matrix z = make_states(n, 2 * n);
    for (auto _ : state) {
        ConceptionVector c = compute_conception(z, 8.0);
        benchmark::DoNotOptimize(c.weights.data());
    }
}
BENCHMARK(BM_ComputeConception)->Arg(100)->Arg(500);

static void BM_RidgeSolve(benchmark::State& state) {
    const Index n = state.range(0);
    const Matrix a = make_states(n, 4800);
    const Matrix b = make_states(1, 4800);
    for (auto _ : state) {
        Matrix w = ridge_solve(a, b, 0.001);
        benchmark::DoNotOptimize(w.data());
    }
}
BENCHMARK(BM_RidgeSolve)->Arg(100)->Arg(500);

BENCHMARK_MAIN();
