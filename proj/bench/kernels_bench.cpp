// Serial reference path vs OpenMP path for each data-parallel kernel.
// Arg 0 selects Execution::Serial, arg 1 Execution::Parallel.

#include <benchmark/benchmark.h>

#include <vector>

#include "dftidx/bench_sweep.hpp"
#include "dftidx/datagen.hpp"
#include "dftidx/engine.hpp"
#include "dftidx/kernels.hpp"
#include "dftidx/selectivity.hpp"

using namespace dftidx;

namespace {

Execution mode(const benchmark::State& state) {
    return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

const std::vector<TimeSequence>& dataset() {
    static const auto data = [] {
        GenSpec spec;
        spec.count = 4000;
        spec.length = 128;
        return random_walk(spec, Execution::Serial);
    }();
    return data;
}

const Engine& engine() {
    static const Engine e = Engine::index_dataset(dataset(), {.k = 2});
    return e;
}

void BM_RandomWalk(benchmark::State& state) {
    GenSpec spec;
    spec.count = 4000;
    for (auto _ : state) benchmark::DoNotOptimize(random_walk(spec, mode(state)));
    state.SetItemsProcessed(state.iterations() * 4000);
}

void BM_FeatureBatch(benchmark::State& state) {
    const auto& data = dataset();
    for (auto _ : state) benchmark::DoNotOptimize(extract_feature_batch(data, 2, mode(state)));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(data.size()));
}

void BM_ScanRange(benchmark::State& state) {
    const auto rows = engine().store().normalized_rows();
    const auto q = engine().store().normalized(7);
    const double eps = 0.7 * engine().max_amp();
    for (auto _ : state) benchmark::DoNotOptimize(scan_range(rows, q, eps, mode(state)));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(rows.rows()));
}

void BM_ScanPairs(benchmark::State& state) {
    const auto all = engine().store().normalized_rows();
    const RowView rows{all.data.first(1000 * all.row_length), all.row_length};
    const double eps = 0.32 * engine().max_amp();
    for (auto _ : state) benchmark::DoNotOptimize(scan_pairs(rows, eps, mode(state)));
}

void BM_MonteCarlo(benchmark::State& state) {
    const SelectivityParams p{1.0, 3, 0.35};
    for (auto _ : state) {
        benchmark::DoNotOptimize(monte_carlo_selectivity(p, QueryPosition::Worst, 1'000'000, 1, mode(state)));
    }
    state.SetItemsProcessed(state.iterations() * 1'000'000);
}

void BM_RangeQueryBatch(benchmark::State& state) {
    BenchConfig cfg;
    cfg.dataset = dataset();
    cfg.repetitions = 200;
    cfg.timing = false;
    cfg.exec = mode(state);
    const std::vector<double> fractions{0.7};
    for (auto _ : state) benchmark::DoNotOptimize(bench_sweep(cfg, SweepKind::Threshold, fractions));
}

}  // namespace

BENCHMARK(BM_RandomWalk)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FeatureBatch)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScanRange)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ScanPairs)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarlo)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RangeQueryBatch)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
