#include <benchmark/benchmark.h>

#include "betaflow/ifs.hpp"
#include "betaflow/models.hpp"
#include "betaflow/rng.hpp"

using namespace betaflow;

static void BM_forward_run(benchmark::State& state) {
    const auto c = models::build_case("m1_t2", {{"z", 2.0}, {"p", 0.3}});
    rng::StreamKey key{42, 0, 0};
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ifs::forward_run(c.mu, 0.5, n, key));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_forward_run)->Arg(50)->Arg(200);

static void BM_backward_nest(benchmark::State& state) {
    const auto c = models::build_case("m1_t2", {{"z", 2.0}, {"p", 0.3}});
    rng::StreamKey key{42, 0, 0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(ifs::backward_nest(c.mu, key).limit);
    }
}
BENCHMARK(BM_backward_nest);

static void BM_backward_nest_beta_pair(benchmark::State& state) {
    const auto c =
        models::build_case("m2_dg", {{"w", 1.0}, {"y", 1.0}, {"z", 1.0}});
    rng::StreamKey key{42, 0, 0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(ifs::backward_nest(c.mu, key).limit);
    }
}
BENCHMARK(BM_backward_nest_beta_pair);

static void BM_gamma_forward_run(benchmark::State& state) {
    const auto c =
        models::build_case("m2_dg", {{"w", 1.0}, {"y", 1.0}, {"z", 1.0}});
    rng::StreamKey key{42, 0, 0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(ifs::gamma_forward_run(c.mu, 2.0, 1.0, 200, key));
    }
    state.SetItemsProcessed(state.iterations() * 200);
}
BENCHMARK(BM_gamma_forward_run);

static void BM_left_product_run(benchmark::State& state) {
    const auto c = models::build_case("m1_t1", {{"p", 0.5}});
    rng::StreamKey key{42, 0, 0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(ifs::left_product_run(c.mu, key, 1e-10));
    }
}
BENCHMARK(BM_left_product_run);
