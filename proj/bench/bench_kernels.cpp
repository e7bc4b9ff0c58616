// Serial reference against the OpenMP path for the three parallel kernels.

#include <random>

#include <benchmark/benchmark.h>

#include "entlab/means.hpp"

using namespace entlab;

namespace {

Exec exec_of(const benchmark::State& state)
{
    return state.range(0) == 0 ? Exec::serial : Exec::parallel;
}

const EntireFunction& random_poly()
{
    static const EntireFunction f = [] {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        std::vector<std::complex<double>> a(41);
        for (auto& x : a) {
            const double re = unif(rng);
            x = {re, unif(rng)};
        }
        return EntireFunction::polynomial(a);
    }();
    return f;
}

void BM_circle_sup(benchmark::State& state)
{
    EvalOptions options;
    options.exec = exec_of(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(circle_sup(random_poly(), 3.0, 1e-8, options));
    }
}

void BM_quadrature(benchmark::State& state)
{
    EvalOptions options;
    options.exec = exec_of(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mean_p_quadrature(random_poly(), 3.0, 3.0, 1e-10, options));
    }
}

void BM_growth_grid(benchmark::State& state)
{
    EvalOptions options;
    options.exec = exec_of(state);
    const auto grid = geometric_grid(0.0625, 128.0, 128);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            growth_certificate(EntireFunction::exponential(), MeanParams::make(2.0), 0.1, grid, 1e-10, options));
    }
}

} // namespace

BENCHMARK(BM_circle_sup)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_quadrature)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_growth_grid)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
