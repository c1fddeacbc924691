#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "sklern/expansion.hpp"
#include "sklern/radial.hpp"
#include "sklern/symfun.hpp"

using namespace sklern;

static void BM_sigma(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    std::vector<double> x(static_cast<size_t>(n));
    for (double& v : x) {
        v = g(rng);
    }
    const EigenVector lam(x);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sigma(n / 2, lam));
    }
}
BENCHMARK(BM_sigma)->Arg(4)->Arg(8)->Arg(16);

static void BM_expand(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    std::vector<double> kappa;
    for (int i = 0; i < n - 1; ++i) {
        kappa.push_back(0.3 + 0.2 * i);
    }
    const BoundaryData bd{n, 2, kappa};
    for (auto _ : state) {
        benchmark::DoNotOptimize(expand(bd, 2 * n, 0.0).c_n1);
    }
}
BENCHMARK(BM_expand)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

static void BM_solve_annulus(benchmark::State& state)
{
    const RadialProblem prob{3, 2, Annulus{1.0, 4.0}, static_cast<int>(state.range(0))};
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_annulus(prob).max_residual);
    }
}
BENCHMARK(BM_solve_annulus)->Arg(1000)->Arg(4000)->Arg(16000)->Unit(benchmark::kMillisecond);

static void BM_solve_ball(benchmark::State& state)
{
    const RadialProblem prob{4, 2, Ball{1.0}, static_cast<int>(state.range(0))};
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_ball(prob).max_residual);
    }
}
BENCHMARK(BM_solve_ball)->Arg(4000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
