#include <benchmark/benchmark.h>

#include <qd/cvt.hpp>

using namespace qd;

static void BM_CvtBuild(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    const Bounds unit(2, Interval{0.0, 1.0});
    for (auto _ : state) {
        benchmark::DoNotOptimize(cvt_build_seeded(k, 100 * k, unit, 1));
    }
}
BENCHMARK(BM_CvtBuild)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_NearestCentroidIndexed(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    const Bounds unit(2, Interval{0.0, 1.0});
    const auto set = cvt_build_seeded(k, 100 * k, unit, 1);
    RngStream rng(9, StreamPurpose::Generic);
    Descriptor q{rng.next_double(), rng.next_double()};
    for (auto _ : state) {
        benchmark::DoNotOptimize(set.nearest(q));
        q[0] = q[0] < 0.5 ? q[0] + 0.3 : q[0] - 0.5;
        q[1] = q[1] < 0.5 ? q[1] + 0.2 : q[1] - 0.5;
    }
}
BENCHMARK(BM_NearestCentroidIndexed)->Arg(1000)->Arg(4096);

static void BM_NearestCentroidBrute(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    const Bounds unit(2, Interval{0.0, 1.0});
    const auto set = cvt_build_seeded(k, 100 * k, unit, 1);
    RngStream rng(9, StreamPurpose::Generic);
    Descriptor q{rng.next_double(), rng.next_double()};
    for (auto _ : state) {
        benchmark::DoNotOptimize(nearest_centroid(q, set.centroids));
        q[0] = q[0] < 0.5 ? q[0] + 0.3 : q[0] - 0.5;
        q[1] = q[1] < 0.5 ? q[1] + 0.2 : q[1] - 0.5;
    }
}
BENCHMARK(BM_NearestCentroidBrute)->Arg(1000)->Arg(4096);

BENCHMARK_MAIN();
