#include <benchmark/benchmark.h>

#include <qd/engine.hpp>
#include <qd/gp.hpp>
#include <qd/surrogate.hpp>
#include <qd/tasks.hpp>

using namespace qd;

static void BM_MapElitesIteration(benchmark::State& state) {
    const auto objective = make_arm_objective(8);
    const GridSpec grid{{64, 64}, objective.descriptor_bounds};
    const auto batch = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(map_elites(grid, objective, 1000, 50, batch, 1));
    }
    state.SetItemsProcessed(state.iterations() * (1000 + 50 * batch));
}
BENCHMARK(BM_MapElitesIteration)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_ArmEvaluation(benchmark::State& state) {
    const auto objective = make_arm_objective(8);
    RngStream rng(1, StreamPurpose::Generic);
    Genotype pose(8);
    for (auto& a : pose) a = rng.uniform(-3.0, 3.0);
    RngStream noise(2, StreamPurpose::EvalNoise);
    for (auto _ : state) benchmark::DoNotOptimize(objective.evaluator(pose, noise));
}
BENCHMARK(BM_ArmEvaluation);

static void BM_GpFit(benchmark::State& state) {
    const auto n = state.range(0);
    RngStream rng(3, StreamPurpose::Generic);
    std::vector<Genotype> inputs;
    std::vector<double> targets;
    for (int i = 0; i < n; ++i) {
        inputs.push_back({rng.next_double(), rng.next_double()});
        targets.push_back(rng.next_normal());
    }
    GpConfig config;
    config.length_scales = {0.3, 0.3};
    config.noise_variance = 1e-6;
    for (auto _ : state) benchmark::DoNotOptimize(GpModel::fit(inputs, targets, config));
}
BENCHMARK(BM_GpFit)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

static void BM_GpPredict(benchmark::State& state) {
    const auto n = state.range(0);
    RngStream rng(3, StreamPurpose::Generic);
    std::vector<Genotype> inputs;
    std::vector<double> targets;
    for (int i = 0; i < n; ++i) {
        inputs.push_back({rng.next_double(), rng.next_double()});
        targets.push_back(rng.next_normal());
    }
    GpConfig config;
    config.length_scales = {0.3, 0.3};
    config.noise_variance = 1e-6;
    const auto model = GpModel::fit(inputs, targets, config);
    Genotype q{0.5, 0.5};
    for (auto _ : state) {
        benchmark::DoNotOptimize(model.predict(q));
        q[0] = q[0] < 0.5 ? q[0] + 0.25 : q[0] - 0.5;
    }
}
BENCHMARK(BM_GpPredict)->Arg(100)->Arg(500);

BENCHMARK_MAIN();
