#include <benchmark/benchmark.h>

#include "schedwin/capacity_search.hpp"
#include "schedwin/simulate.hpp"
#include "schedwin/window_search.hpp"

namespace {

using namespace schedwin;

void bm_md1k(benchmark::State& state) {
    const auto k = state.range(0);
    for (auto _ : state) {
        auto dist = md1k_distribution(19.0, 20.0, k);
        benchmark::DoNotOptimize(dist.probs.data());
    }
}
BENCHMARK(bm_md1k)->Arg(20)->Arg(100)->Arg(1000);

void bm_reward_curve_md(benchmark::State& state) {
    const EconomicParams econ{1.5, 0.5, 0.0, 20.0};
    const ShowupModel model = kopach_model(0.4);
    for (auto _ : state) {
        RewardCurve curve(ServiceLaw::Deterministic, 19.9, 20.0, econ, model,
                          state.range(0));
        benchmark::DoNotOptimize(curve.total(state.range(0)));
    }
}
BENCHMARK(bm_reward_curve_md)->Arg(1000);

void bm_optimal_window(benchmark::State& state) {
    const EconomicParams econ{1.5, 0.5, 0.0, 20.0};
    const ShowupModel model = kopach_model(0.4);
    const ServiceLaw law =
        state.range(0) == 0 ? ServiceLaw::Exponential : ServiceLaw::Deterministic;
    for (auto _ : state) {
        auto res = optimal_window(law, 19.9, 20.0, econ, model);
        benchmark::DoNotOptimize(res.t_at_k_star);
    }
}
BENCHMARK(bm_optimal_window)->Arg(0)->Arg(1);

void bm_panel_search(benchmark::State& state) {
    const EconomicParams econ{1.5, 0.5, 2.0, 20.0};
    const ShowupModel model = kopach_model(0.2);
    for (auto _ : state) {
        auto res = optimal_panel(CapacityMode::OptimizeMu, ServiceLaw::Exponential,
                                 econ, model);
        benchmark::DoNotOptimize(res.objective);
    }
}
BENCHMARK(bm_panel_search);

void bm_simulate_short(benchmark::State& state) {
    SimConfig cfg;
    cfg.spec = QueueSpec{19.0, 20.0, 20, ServiceLaw::Exponential};
    cfg.showup = kopach_model(0.2);
    cfg.econ = EconomicParams{1.5, 0.5, 0.0, 20.0};
    cfg.horizon_days = 2000.0;
    cfg.warmup_days = 200.0;
    for (auto _ : state) {
        auto res = simulate(cfg);
        benchmark::DoNotOptimize(res.reward_per_day);
    }
}
BENCHMARK(bm_simulate_short);

}  // namespace

BENCHMARK_MAIN();
