#include "magband/branches.hpp"
#include "magband/factorized.hpp"
#include "magband/oracle2d.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

using namespace magband;

// One fiber eigensolve at a fixed frequency; the dominant cost of branch
// tracing, sweeps, and the density-of-states quadrature alike.
void BM_FiberPointSolve(benchmark::State& state) {
    BranchTracer tr(2, 1, 3);
    double eta = static_cast<double>(state.range(0));
    for (auto _ : state) {
        PointSolve ps = tr.solve(eta);
        benchmark::DoNotOptimize(ps.values[0]);
    }
}
BENCHMARK(BM_FiberPointSolve)->Arg(1)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

// Ground bottom through the factorized bidiagonal path, where the value
// sits dozens to hundreds of orders of magnitude below the matrix scale.
void BM_FactorizedBottom(benchmark::State& state) {
    double eta = static_cast<double>(state.range(0));
    auto g = [eta](double x) { return eta - 0.5 * x * x; };
    double turn = std::sqrt(2.0 * eta);
    Grid1D grid{-turn - 6.0, turn + 6.0, 2401};
    for (auto _ : state) {
        RefinedValue rv = ground_factorized_refined(g, 1.0, grid);
        benchmark::DoNotOptimize(rv.value);
    }
}
BENCHMARK(BM_FactorizedBottom)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

// Assembly plus counted factorization of the 2D Dirichlet box at one
// threshold; scaling is dominated by the bandwidth-squared factor cost.
void BM_SpectralCount2d(benchmark::State& state) {
    ModelParams p;
    p.nu = 2;
    p.ell = 0;
    p.h = 0.4;
    p.mu = 3.0;
    Box2D box;
    box.x1_lo = box.x2_lo = -0.4;
    box.x1_hi = box.x2_hi = 0.4;
    box.n1 = box.n2 = static_cast<int>(state.range(0));
    Oracle2dOptions opts;
    opts.check_resolution = false;
    for (auto _ : state) {
        auto A = build_2d(p, box, opts);
        CountInterval c = count_below_2d(A, 11.0);
        benchmark::DoNotOptimize(c.at_tau);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SpectralCount2d)->Arg(24)->Arg(48)->Arg(96)->Unit(benchmark::kMillisecond)->Complexity();

} // namespace

BENCHMARK_MAIN();
