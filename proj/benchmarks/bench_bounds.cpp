#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "logitmm/bounds.hpp"

namespace {

std::vector<double> draws(std::size_t n, double spread)
{
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> U(-spread, spread);
    std::vector<double> v(n);
    for (auto& x : v) x = U(rng);
    return v;
}

void BM_PgWeight(benchmark::State& state)
{
    const auto z = draws(4096, static_cast<double>(state.range(0)));
    for (auto _ : state) {
        double acc = 0.0;
        for (double x : z) acc += logitmm::pg_weight(x);
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(z.size()));
}
BENCHMARK(BM_PgWeight)->Arg(1)->Arg(50);

void BM_PqCoeffs(benchmark::State& state)
{
    const auto z = draws(4096, static_cast<double>(state.range(0)));
    for (auto _ : state) {
        double acc = 0.0;
        for (double x : z) {
            const auto c = logitmm::pq_coeffs(x);
            acc += c.w + c.nu;
        }
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(z.size()));
}
BENCHMARK(BM_PqCoeffs)->Arg(1)->Arg(50);

void BM_EvalBound(benchmark::State& state)
{
    const auto kind = static_cast<logitmm::BoundKind>(state.range(0));
    const auto r = draws(4096, 30.0);
    for (auto _ : state) {
        double acc = 0.0;
        for (double x : r) acc += logitmm::eval_bound(kind, x, 5.0);
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(r.size()));
}
BENCHMARK(BM_EvalBound)->DenseRange(0, 2);

}  // namespace
