#include <random>

#include <benchmark/benchmark.h>

#include "logitmm/box_qp.hpp"
#include "logitmm/coord_solver.hpp"
#include "logitmm/data_pipeline.hpp"
#include "logitmm/ridge_solver.hpp"

using namespace logitmm;

namespace {

Matrix gaussian(Index rows, Index cols, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N01;
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = N01(rng);
    return m;
}

// Re-weight and solve, as one MM step does; range(0) = p, range(1) = method.
void BM_RidgeSystemStep(benchmark::State& state)
{
    const Index n = 40, p = state.range(0);
    const auto method = state.range(1) == 0 ? RidgeSystem::Method::Dense : RidgeSystem::Method::Woodbury;
    const Matrix X = gaussian(n, p, 1);
    RidgeSystem sys(X, ridge_diagonal(p, 0.2, 1e-8), method);
    Vector w = Vector::Constant(n, 0.2);
    const Vector v = gaussian(p, 1, 2).col(0);
    for (auto _ : state) {
        w[0] += 1e-9;
        sys.set_weights(w);
        benchmark::DoNotOptimize(sys.solve(v));
    }
}
BENCHMARK(BM_RidgeSystemStep)
    ->ArgsProduct({{100, 500, 2000}, {0, 1}})
    ->ArgNames({"p", "woodbury"})
    ->Unit(benchmark::kMicrosecond);

void BM_BoxQp(benchmark::State& state)
{
    const Index n = state.range(0);
    const Matrix B = gaussian(n, n + 5, 3);
    BoxQpProblem problem;
    problem.M = B * B.transpose() / static_cast<double>(n);
    problem.q = 2.0 * gaussian(n, 1, 4).col(0);
    for (auto _ : state) benchmark::DoNotOptimize(solve_box_qp(problem, {1e-10, 1'000'000}));
}
BENCHMARK(BM_BoxQp)->Arg(10)->Arg(40)->Arg(200)->Unit(benchmark::kMicrosecond);

void BM_Piecewise1D(benchmark::State& state)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    PiecewiseProblem1D problem{1.0, 0.5, {}};
    for (long k = 0; k < state.range(0); ++k) problem.knots.push_back({U(rng), 0.1 + 0.5 * (U(rng) + 3.0)});
    for (auto _ : state) benchmark::DoNotOptimize(maximize_piecewise_1d(problem));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Piecewise1D)->RangeMultiplier(4)->Range(4, 4096)->Complexity(benchmark::oNLogN);

void BM_SolveRidge(benchmark::State& state)
{
    const auto s = synth({40, 500, 1, 0.02, 1.0});
    SolverConfig config;
    config.kind = static_cast<BoundKind>(state.range(0));
    config.stop = StopRule::GradientNorm;
    config.tol = 1e-7;
    long iters = 0;
    for (auto _ : state) {
        const auto r = solve_ridge(s.data, 0.2, config);
        iters = r.n_iter;
        benchmark::DoNotOptimize(r.beta_hat.data());
    }
    state.counters["mm_iters"] = static_cast<double>(iters);
}
BENCHMARK(BM_SolveRidge)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace
