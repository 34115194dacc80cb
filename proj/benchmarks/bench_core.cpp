#include <benchmark/benchmark.h>

#include "larglab/matcher.hpp"

using namespace larglab;

static void BM_CrossingsPL(benchmark::State& state) {
    PLFunction a = sample_pl(1, 0);
    PLFunction b = sample_pl(1, 1);
    for (auto _ : state) benchmark::DoNotOptimize(crossings(a, b));
}
BENCHMARK(BM_CrossingsPL);

static void BM_CrossingsBrownian(benchmark::State& state) {
    int depth = static_cast<int>(state.range(0));
    PLFunction a = sample_brownian(2, 0, depth).to_pl();
    PLFunction b = sample_brownian(2, 1, depth).to_pl();
    for (auto _ : state) benchmark::DoNotOptimize(crossings(a, b));
    state.SetComplexityN(1 << depth);
}
BENCHMARK(BM_CrossingsBrownian)->Arg(8)->Arg(10)->Arg(12);

static void BM_SupNormExact(benchmark::State& state) {
    PLFunction a = sample_brownian(3, 0, 10).to_pl();
    PLFunction b = sample_brownian(3, 1, 10).to_pl();
    for (auto _ : state) benchmark::DoNotOptimize(sup_norm_diff(a, b));
}
BENCHMARK(BM_SupNormExact);

static void BM_BuildLarg(benchmark::State& state) {
    FamilySpec spec{FuncKind::pl, static_cast<int>(state.range(0)), 99};
    FunctionFamily fam = sample_family(spec);
    for (auto _ : state) benchmark::DoNotOptimize(build_larg(fam, 0.5, 7));
}
BENCHMARK(BM_BuildLarg)->Arg(20)->Arg(60);

static void BM_CheckTransverse(benchmark::State& state) {
    FamilySpec spec{FuncKind::pl, static_cast<int>(state.range(0)), 123};
    auto view = render_family(sample_family(spec));
    for (auto _ : state) benchmark::DoNotOptimize(check_transverse(view));
}
BENCHMARK(BM_CheckTransverse)->Arg(20)->Arg(100);

static void BM_CrossingPartition(benchmark::State& state) {
    FamilySpec spec{FuncKind::bm, 4, 40, 8};
    auto view = normalize_to_zero(render_family(sample_family(spec)));
    for (auto _ : state) benchmark::DoNotOptimize(crossing_partition(view));
}
BENCHMARK(BM_CrossingPartition);

static void BM_SdTarget(benchmark::State& state) {
    FamilySpec spec{FuncKind::pl, 6, 77};
    auto view = normalize_to_zero(render_family(sample_family(spec)));
    PLFamilyView Vn(view.begin(), view.begin() + 5);
    const PLFunction& fresh = view[5].fn;
    for (auto _ : state) benchmark::DoNotOptimize(build_sd_target(fresh, Vn, Vn));
}
BENCHMARK(BM_SdTarget);

static void BM_SampleBrownian(benchmark::State& state) {
    int depth = static_cast<int>(state.range(0));
    std::uint64_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(sample_brownian(5, i++, depth));
}
BENCHMARK(BM_SampleBrownian)->Arg(10)->Arg(14);

BENCHMARK_MAIN();
