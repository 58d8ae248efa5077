#include <benchmark/benchmark.h>

#include <limits>

#include "rfpe/rfpe.hpp"

namespace {

using namespace rfpe;

void BM_Update(benchmark::State& state, UpdateVariant variant) {
    const LikelihoodFn likelihood = model_likelihood(std::numeric_limits<double>::infinity());
    FilterConfig cfg;
    cfg.samples = static_cast<std::size_t>(state.range(0));
    const PhaseModel prior{1.0, 0.05};
    const ExperimentSpec exp{25.0, 1.0};
    Rng rng(1);
    for (auto _ : state) benchmark::DoNotOptimize(update(variant, prior, Outcome::zero, exp, cfg, likelihood, rng));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_Update, incremental, UpdateVariant::incremental)->Arg(200)->Arg(2000)->Arg(12000);
BENCHMARK_CAPTURE(BM_Update, circular, UpdateVariant::circular)->Arg(200)->Arg(2000)->Arg(12000);

void BM_Pgh(benchmark::State& state) {
    DesignConfig cfg;
    cfg.cap = static_cast<CapMode>(state.range(0));
    Rng rng(2);
    const PhaseModel model{2.0, 1e-6};
    for (auto _ : state) benchmark::DoNotOptimize(pgh_t2(model, 1000.0, cfg, rng));
}
BENCHMARK(BM_Pgh)->Arg(static_cast<int>(CapMode::deterministic))->Arg(static_cast<int>(CapMode::stochastic));

void BM_GridPosterior(benchmark::State& state) {
    const LikelihoodFn likelihood = model_likelihood(std::numeric_limits<double>::infinity());
    const GridPosterior prior = wrapped_normal_grid({1.0, 0.3}, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(grid_moments(grid_posterior(prior, Outcome::one, {7.0, 0.5}, likelihood)));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GridPosterior)->Arg(1 << 12)->Arg(1 << 16);

void BM_RunTrial(benchmark::State& state) {
    RunConfig cfg;
    cfg.filter.samples = static_cast<std::size_t>(state.range(0));
    cfg.experiments = 150;
    cfg.restarts = state.range(1) != 0;
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(run_trial(cfg, seed++));
}
BENCHMARK(BM_RunTrial)->Args({200, 0})->Args({2000, 0})->Args({2000, 1})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
