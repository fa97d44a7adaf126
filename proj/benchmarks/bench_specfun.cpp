#include <benchmark/benchmark.h>

#include "betaflow/specfun.hpp"

using namespace betaflow;

static void BM_log_gamma(benchmark::State& state) {
    double x = 0.37;
    for (auto _ : state) {
        benchmark::DoNotOptimize(specfun::log_gamma(x));
        x += 1e-6;
    }
}
BENCHMARK(BM_log_gamma);

static void BM_reg_inc_beta(benchmark::State& state) {
    double x = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(specfun::reg_inc_beta(x, 2.5, 3.5));
        x = x < 0.98 ? x + 1e-4 : 0.01;
    }
}
BENCHMARK(BM_reg_inc_beta);

static void BM_reg_inc_gamma(benchmark::State& state) {
    double x = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(specfun::reg_inc_gamma(2.5, x));
        x = x < 12.0 ? x + 1e-3 : 0.01;
    }
}
BENCHMARK(BM_reg_inc_gamma);

static void BM_hyp2f1(benchmark::State& state) {
    const double t = 0.1 * static_cast<double>(state.range(0));
    const specfun::complex_t eta{0.0, t};
    for (auto _ : state) {
        benchmark::DoNotOptimize(specfun::hyp2f1(1.3, 2.4, 3.7, eta));
    }
}
BENCHMARK(BM_hyp2f1)->Arg(1)->Arg(2)->Arg(4);
