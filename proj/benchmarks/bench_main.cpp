// Microbenchmarks for the hot paths: rectification solving, registry
// classification, threshold-view construction, and dithering throughput.

#include "polydither/exact_cover.hpp"
#include "polydither/halftone.hpp"
#include "polydither/rank_table.hpp"
#include "polydither/shape_asset.hpp"
#include "polydither/structure.hpp"
#include "polydither/vnc.hpp"

#include <benchmark/benchmark.h>

namespace pd = polydither;

namespace {

const pd::StructureRegistry& registry() {
    static pd::StructureRegistry reg =
        pd::buildRegistry(pd::canonicalGHexomino(), pd::gHexominoRule());
    return reg;
}

void BM_RectangleCover(benchmark::State& state) {
    const pd::CellSet& shape = pd::canonicalGHexomino();
    std::vector<pd::Cell> rect;
    for (int y = 0; y < 9; ++y)
        for (int x = 0; x < 12; ++x)
            rect.push_back({x, y});
    pd::CellSet region(rect);
    for (auto _ : state) {
        auto solutions = pd::solveExactCover(region, shape, 1);
        benchmark::DoNotOptimize(solutions);
    }
}
BENCHMARK(BM_RectangleCover)->Unit(benchmark::kMillisecond);

void BM_SubdividePatch(benchmark::State& state) {
    const pd::CellSet& shape = pd::canonicalGHexomino();
    const pd::ProductionRule& rule = pd::gHexominoRule();
    for (auto _ : state) {
        pd::Tiling patch = pd::subdividePatch(shape, rule, 2);
        benchmark::DoNotOptimize(patch);
    }
}
BENCHMARK(BM_SubdividePatch)->Unit(benchmark::kMillisecond);

void BM_ClassifyTiles(benchmark::State& state) {
    const pd::CellSet& shape = pd::canonicalGHexomino();
    const pd::ProductionRule& rule = pd::gHexominoRule();
    const pd::StructureRegistry& reg = registry();
    pd::Tiling patch = pd::subdividePatch(shape, rule, 2);
    for (auto _ : state) {
        auto ids = pd::classifyTiles(patch, reg);
        benchmark::DoNotOptimize(ids);
    }
}
BENCHMARK(BM_ClassifyTiles)->Unit(benchmark::kMillisecond);

// Threshold-view construction and dithering cost per pixel is independent of
// how the ranks were optimized, so a synthetic identity-permutation table
// exercises the same code path as a production one without the offline
// optimization.
struct SmallTable {
    pd::GeometryTable geometry;
    pd::RankTable table;

    SmallTable() {
        const pd::StructureRegistry& reg = registry();
        const int S = 8;
        geometry = pd::buildGeometryTable(reg, S);
        table.S = S;
        table.d0 = 1.0 / S;
        table.shapeName = "ghexomino";
        table.perClass.resize(reg.classCount());
        for (auto& ranks : table.perClass) {
            ranks.resize(static_cast<std::size_t>(table.levels()));
            for (int i = 0; i < table.levels(); ++i)
                ranks[i] = i;
        }
    }
};

const SmallTable& smallTable() {
    static SmallTable t;
    return t;
}

void BM_BuildThresholdView(benchmark::State& state) {
    const pd::StructureRegistry& reg = registry();
    const SmallTable& t = smallTable();
    int size = static_cast<int>(state.range(0));
    for (auto _ : state) {
        pd::ThresholdView view =
            pd::buildThresholdView(size, size, reg, t.geometry, t.table);
        benchmark::DoNotOptimize(view);
    }
    state.SetItemsProcessed(state.iterations() * size * size);
}
BENCHMARK(BM_BuildThresholdView)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_DitherConstant(benchmark::State& state) {
    const pd::StructureRegistry& reg = registry();
    const SmallTable& t = smallTable();
    int size = static_cast<int>(state.range(0));
    pd::ThresholdView view = pd::buildThresholdView(size, size, reg, t.geometry, t.table);
    for (auto _ : state) {
        pd::BinaryImage out = pd::ditherConstant(6.0 / 256.0, view);
        benchmark::DoNotOptimize(out);
    }
    state.SetItemsProcessed(state.iterations() * size * size);
}
BENCHMARK(BM_DitherConstant)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_VoidAndCluster(benchmark::State& state) {
    for (auto _ : state) {
        pd::VncMatrix m = pd::voidAndClusterMatrix(static_cast<int>(state.range(0)), 0.1,
                                                   1.5, 7);
        benchmark::DoNotOptimize(m);
    }
}
BENCHMARK(BM_VoidAndCluster)->Arg(32)->Arg(62)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
