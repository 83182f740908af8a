#include <benchmark/benchmark.h>

#include <qd/containers.hpp>
#include <qd/cvt.hpp>
#include <qd/grid.hpp>

using namespace qd;

namespace {

Individual random_individual(RngStream& rng, std::int64_t id) {
    Individual ind;
    ind.descriptor = {rng.next_double(), rng.next_double()};
    ind.genotype = {rng.next_double(), rng.next_double()};
    ind.fitness = rng.uniform(-1, 1);
    ind.eval_index = id;
    return ind;
}

}  // namespace

static void BM_GridCellIndex(benchmark::State& state) {
    const GridSpec spec{{64, 64}, Bounds(2, Interval{0.0, 1.0})};
    RngStream rng(1, StreamPurpose::Generic);
    Descriptor d{rng.next_double(), rng.next_double()};
    for (auto _ : state) {
        benchmark::DoNotOptimize(grid_linear_cell(d, spec));
        d[0] = d[0] < 0.5 ? d[0] + 0.25 : d[0] - 0.5;
    }
}
BENCHMARK(BM_GridCellIndex);

static void BM_GridAdd(benchmark::State& state) {
    RngStream gen(2, StreamPurpose::Generic);
    RngStream add_rng(3, StreamPurpose::ContainerAdd);
    std::vector<Individual> stream;
    for (int i = 0; i < 4096; ++i) stream.push_back(random_individual(gen, i));
    for (auto _ : state) {
        GridContainer grid(GridSpec{{64, 64}, Bounds(2, Interval{0.0, 1.0})});
        for (const auto& ind : stream) benchmark::DoNotOptimize(grid.add(ind, add_rng));
    }
    state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_GridAdd);

static void BM_CvtAdd(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    auto centroids = std::make_shared<const CentroidSet>(
        cvt_build_seeded(k, 100 * k, Bounds(2, Interval{0.0, 1.0}), 1));
    RngStream gen(2, StreamPurpose::Generic);
    RngStream add_rng(3, StreamPurpose::ContainerAdd);
    std::vector<Individual> stream;
    for (int i = 0; i < 4096; ++i) stream.push_back(random_individual(gen, i));
    for (auto _ : state) {
        CvtContainer cvt(centroids);
        for (const auto& ind : stream) benchmark::DoNotOptimize(cvt.add(ind, add_rng));
    }
    state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_CvtAdd)->Arg(256)->Arg(1024)->Arg(4096);

static void BM_DistanceArchiveAdd(benchmark::State& state) {
    RngStream gen(2, StreamPurpose::Generic);
    RngStream add_rng(3, StreamPurpose::ContainerAdd);
    std::vector<Individual> stream;
    for (int i = 0; i < 2048; ++i) stream.push_back(random_individual(gen, i));
    for (auto _ : state) {
        DistanceArchive archive(0.02, Bounds(2, Interval{0.0, 1.0}));
        for (const auto& ind : stream) benchmark::DoNotOptimize(archive.add(ind, add_rng));
    }
    state.SetItemsProcessed(state.iterations() * 2048);
}
BENCHMARK(BM_DistanceArchiveAdd);

BENCHMARK_MAIN();
