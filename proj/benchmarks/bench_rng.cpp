#include <benchmark/benchmark.h>

#include "betaflow/dist.hpp"
#include "betaflow/rng.hpp"

using namespace betaflow;

static void BM_next_u64(benchmark::State& state) {
    rng::StreamKey key{42, 0, 0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(rng::next_u64(key));
    }
}
BENCHMARK(BM_next_u64);

static void BM_next_u01(benchmark::State& state) {
    rng::StreamKey key{42, 0, 0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(rng::next_u01(key));
    }
}
BENCHMARK(BM_next_u01);

static void BM_gamma_draw(benchmark::State& state) {
    rng::StreamKey key{42, 0, 0};
    const double shape = static_cast<double>(state.range(0)) / 10.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(dist::gamma_draw(shape, key));
    }
}
BENCHMARK(BM_gamma_draw)->Arg(3)->Arg(10)->Arg(27)->Arg(100);

static void BM_beta_draw(benchmark::State& state) {
    rng::StreamKey key{42, 0, 0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(dist::beta_draw(2.0, 2.0, key));
    }
}
BENCHMARK(BM_beta_draw);

static void BM_tent_power_draw(benchmark::State& state) {
    rng::StreamKey key{42, 0, 0};
    const auto spec = dist::DistSpec::tent_power(2.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dist::draw(spec, key));
    }
}
BENCHMARK(BM_tent_power_draw);
