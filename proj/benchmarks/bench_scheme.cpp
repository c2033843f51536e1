#include <benchmark/benchmark.h>

#include "nsdde/nsdde.hpp"

using namespace nsdde;

namespace {

const InitialSegment kXi = InitialSegment::constant(Vector::Ones(1));

void BM_Simulate(benchmark::State& state) {
    const NsddeModel m = builtin_neutral_cubic(0.5, -1.0, -1.0, 1.0);
    const DelayGrid g = make_grid(1.0, 2.0, 1.0 / static_cast<double>(state.range(0)));
    const BrownianPath w = generate(g, 1, 1, 0);
    for (auto _ : state) benchmark::DoNotOptimize(simulate(m, kXi, g, w));
    state.SetItemsProcessed(state.iterations() * g.total_steps());
}
BENCHMARK(BM_Simulate)->Arg(80)->Arg(640)->Arg(5120);

void BM_Generate(benchmark::State& state) {
    const DelayGrid g = make_grid(1.0, 2.0, 1.0 / static_cast<double>(state.range(0)));
    std::uint64_t p = 0;
    for (auto _ : state) benchmark::DoNotOptimize(generate(g, 1, 1, p++));
    state.SetItemsProcessed(state.iterations() * g.total_steps());
}
BENCHMARK(BM_Generate)->Arg(640)->Arg(5120);

void BM_RefineTo(benchmark::State& state) {
    const NsddeModel m = builtin_neutral_cubic(0.5, -1.0, -1.0, 1.0);
    const DelayGrid fine = make_grid(1.0, 2.0, 1.0 / 640.0);
    const std::int64_t r = state.range(0);
    const BrownianPath w = generate(fine, 1, 1, 0);
    const PathGrid coarse = simulate(m, kXi, fine.coarsened(r), coarsen(w, r));
    for (auto _ : state) benchmark::DoNotOptimize(refine_to(coarse, m, kXi, fine, w));
}
BENCHMARK(BM_RefineTo)->Arg(2)->Arg(8)->Arg(64);

void BM_ConvergeStudy(benchmark::State& state) {
    const NsddeModel m = builtin_neutral_cubic(0.5, -1.0, -1.0, 1.0);
    const auto paths = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            converge_study(m, kXi, 1.0, 2.0, {0.1, 0.05, 0.025, 0.0125}, 0.1, paths, 1));
    }
}
BENCHMARK(BM_ConvergeStudy)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_CheckC3(benchmark::State& state) {
    const NsddeModel m = builtin_neutral_cubic(0.5, -1.0, -1.0, 1.0);
    const DelayGrid g = make_grid(1.0, 2.0, 0.05);
    for (auto _ : state) benchmark::DoNotOptimize(check_c3(m, *m.rates(), g, 10000, 1));
}
BENCHMARK(BM_CheckC3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
