#include "isched/io.hpp"
#include "isched/simulator.hpp"
#include "isched/solver.hpp"

#include <benchmark/benchmark.h>

namespace {

const std::string kData = ISCHED_DATA_DIR;

void optimize_instance(benchmark::State &state, const std::string &instance) {
    const auto spec = isched::load_instance(kData + "/" + instance);
    const auto snap = isched::load_snapshot(kData + "/example_snapshot.json", spec);
    const isched::Scheduler scheduler(spec.conflicts);
    isched::SolverConfig cfg;
    cfg.horizon = static_cast<int>(state.range(0));
    std::uint64_t nodes = 0;
    for (auto _ : state) {
        auto sol = scheduler.optimize_schedule(snap, isched::Phase::closed(spec.path_count()), cfg);
        nodes = sol.nodes_explored;
        benchmark::DoNotOptimize(sol.cost);
    }
    state.counters["nodes"] = static_cast<double>(nodes);
}

void BM_OptimizeDefault(benchmark::State &state) { optimize_instance(state, "default_instance.json"); }
BENCHMARK(BM_OptimizeDefault)->DenseRange(1, 5)->Unit(benchmark::kMicrosecond);

void BM_OptimizeLaneConflicts(benchmark::State &state) {
    optimize_instance(state, "lane_conflicts_instance.json");
}
BENCHMARK(BM_OptimizeLaneConflicts)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

void BM_ExhaustiveOracle(benchmark::State &state) {
    const auto spec = isched::load_instance(kData + "/lane_conflicts_instance.json");
    const auto snap = isched::load_snapshot(kData + "/example_snapshot.json", spec);
    const isched::Scheduler scheduler(spec.conflicts);
    isched::SolverConfig cfg;
    cfg.horizon = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            scheduler.exhaustive_oracle(snap, isched::Phase::closed(spec.path_count()), cfg).cost);
    }
}
BENCHMARK(BM_ExhaustiveOracle)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_SteadyEpisode(benchmark::State &state) {
    isched::SimConfig cfg;
    cfg.mode = isched::SimMode::Steady;
    cfg.intensity = 1.0;
    const auto policy = static_cast<isched::PolicyKind>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(isched::run_episode(cfg, policy, isched::SolverConfig{}).stats.mean_wait);
    }
    state.SetLabel(std::string(isched::policy_name(policy)));
}
BENCHMARK(BM_SteadyEpisode)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
