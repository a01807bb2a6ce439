#include <benchmark/benchmark.h>

#include "skelhedge/first_passage.hpp"
#include "skelhedge/gkw.hpp"
#include "skelhedge/measures.hpp"
#include "skelhedge/rng.hpp"

using namespace skelhedge;

static void BM_Philox(benchmark::State& state) {
    RandomStream rng(1, 2);
    for (auto _ : state) benchmark::DoNotOptimize(rng());
}
BENCHMARK(BM_Philox);

static void BM_ExitTimeTable(benchmark::State& state) {
    RandomStream rng(1, 3);
    for (auto _ : state) benchmark::DoNotOptimize(sample_exit_time_table(rng));
}
BENCHMARK(BM_ExitTimeTable);

static void BM_ExitTimeGamma(benchmark::State& state) {
    RandomStream rng(1, 4);
    for (auto _ : state) benchmark::DoNotOptimize(sample_exit_time_gamma(rng));
}
BENCHMARK(BM_ExitTimeGamma);

static void BM_ExitResidual(benchmark::State& state) {
    RandomStream rng(1, 5);
    const double age = static_cast<double>(state.range(0)) / 10.0;
    for (auto _ : state) benchmark::DoNotOptimize(sample_exit_residual(age, rng));
}
BENCHMARK(BM_ExitResidual)->Arg(1)->Arg(10)->Arg(30);

static void BM_CursorPop(benchmark::State& state) {
    const int p = static_cast<int>(state.range(0));
    SkeletonCursor cur(4, p);
    for (int i = 0; i < p; ++i) cur.restart(i, 0.0, RandomStream(7, stream_id(i)));
    for (auto _ : state) benchmark::DoNotOptimize(cur.pop());
}
BENCHMARK(BM_CursorPop)->Arg(1)->Arg(2)->Arg(5);

static void BM_DerivativeBlac(benchmark::State& state) {
    BlackScholesParams bs;
    bs.spot.assign(5, 100.0);
    bs.vol = {0.35, 0.35, 0.38, 0.35, 0.40};
    bs.correlation.assign(5, std::vector<double>(5, 0.4));
    for (int i = 0; i < 5; ++i) bs.correlation[i][i] = 1.0;
    const auto q = minimal_measure(MarketModel::black_scholes(bs));
    const auto problem = ConditionalProblem::at_origin(q, 1.0);
    const auto h = PayoffSpec::blac(76.0);
    std::uint64_t rep = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(estimate_derivative(problem, h, 3, 0, 10, 1, rep++));
}
BENCHMARK(BM_DerivativeBlac)->Unit(benchmark::kMicrosecond);

static void BM_DerivativeHestonPut(benchmark::State& state) {
    HestonParams hp{100.0, 0.1414213562373095, 2.5, 0.04, 0.3, 0.0, 0.0, 0.0};
    const auto q = minimal_measure(MarketModel::heston(hp));
    const auto problem = ConditionalProblem::at_origin(q, 1.0);
    const auto h = PayoffSpec::put(100.0);
    std::uint64_t rep = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(estimate_derivative(problem, h, 3, 0, 10, 1, rep++));
}
BENCHMARK(BM_DerivativeHestonPut)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
