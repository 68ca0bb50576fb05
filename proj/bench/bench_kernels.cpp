// Serial reference loops against their OpenMP versions.
#include "tickdiff/arch.hpp"
#include "tickdiff/kernels.hpp"
#include "tickdiff/rng.hpp"

#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

using namespace tickdiff;

namespace {

std::vector<double> noise(std::size_t n)
{
    Rng rng(1);
    std::vector<double> x(n);
    for (auto& v : x) v = rng.gaussian();
    return x;
}

template <auto Kernel>
void BM_lag_products(benchmark::State& state)
{
    const auto x = noise(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(x, 0.0, 10));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void BM_dfa_fluctuation(benchmark::State& state)
{
    auto profile = noise(static_cast<std::size_t>(state.range(0)));
    std::partial_sum(profile.begin(), profile.end(), profile.begin());
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(profile, 64));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void BM_snap_to_grid(benchmark::State& state)
{
    const auto x = noise(static_cast<std::size_t>(state.range(0)));
    std::vector<double> out(x.size());
    for (auto _ : state) {
        Kernel(x, out, 0.25);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void BM_sum(benchmark::State& state)
{
    const auto x = noise(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(x));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Experiment>
void BM_coarse_grain(benchmark::State& state)
{
    ArchParams p;
    p.n = static_cast<std::size_t>(state.range(0));
    const auto sweep = CoarseGrainSweep::defaults(p);
    for (auto _ : state) benchmark::DoNotOptimize(Experiment(p, sweep));
}

} // namespace

BENCHMARK(BM_lag_products<kernels::serial::lag_products>)->Name("lag_products/serial")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_lag_products<kernels::parallel::lag_products>)->Name("lag_products/parallel")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_dfa_fluctuation<kernels::serial::dfa_fluctuation>)->Name("dfa_fluctuation/serial")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_dfa_fluctuation<kernels::parallel::dfa_fluctuation>)->Name("dfa_fluctuation/parallel")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_snap_to_grid<kernels::serial::snap_to_grid>)->Name("snap_to_grid/serial")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_snap_to_grid<kernels::parallel::snap_to_grid>)->Name("snap_to_grid/parallel")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_sum<kernels::serial::sum>)->Name("sum/serial")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_sum<kernels::parallel::sum>)->Name("sum/parallel")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_coarse_grain<coarse_grain_experiment_serial>)
    ->Name("coarse_grain/serial")
    ->Arg(1 << 14)
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_coarse_grain<coarse_grain_experiment>)
    ->Name("coarse_grain/parallel")
    ->Arg(1 << 14)
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
