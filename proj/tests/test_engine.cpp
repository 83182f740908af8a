#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <map>
#include <string>

#include <qd/engine.hpp>
#include <qd/tasks.hpp>

using namespace qd;

namespace {

ObjectiveSpec constant_objective() {
    ObjectiveSpec spec;
    spec.name = "constant";
    spec.genotype_bounds = Bounds(2, Interval{0.0, 1.0});
    spec.descriptor_bounds = Bounds(2, Interval{0.0, 1.0});
    spec.evaluator = [](const Genotype&, RngStream&) {
        return std::make_pair(1.0, Descriptor{0.5, 0.5});
    };
    return spec;
}

RunConfig small_arm_config(std::uint64_t seed) {
    RunConfig config;
    config.objective = make_arm_objective(4);
    config.container.kind = ContainerKind::Grid;
    config.container.grid_bins = {8, 8};
    config.init_count = 50;
    config.iterations = 40;
    config.batch_size = 16;
    config.seed = seed;
    return config;
}

bool same_archive(const Container& a, const Container& b) {
    const auto ea = a.all_stored(), eb = b.all_stored();
    if (ea.size() != eb.size()) return false;
    for (std::size_t i = 0; i < ea.size(); ++i) {
        if (ea[i].key != eb[i].key) return false;
        const Individual &x = *ea[i].individual, &y = *eb[i].individual;
        if (x.fitness != y.fitness || x.genotype != y.genotype || x.descriptor != y.descriptor ||
            x.eval_index != y.eval_index || x.curiosity != y.curiosity ||
            x.selection_count != y.selection_count || x.offspring_added != y.offspring_added)
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("evaluation accounting is exactly G + I * batch") {
    RunConfig config = small_arm_config(1);
    config.init_count = 1;
    config.iterations = 1;
    config.batch_size = 1;
    const auto result = qd_run(config);
    CHECK(result.total_evaluations == 2);

    RunConfig bigger = small_arm_config(1);
    const auto r2 = qd_run(bigger);
    CHECK(r2.total_evaluations == 50 + 40 * 16);
    CHECK(r2.metrics.back().evaluations == r2.total_evaluations);

    RunConfig bad = small_arm_config(1);
    bad.iterations = 0;
    CHECK_THROWS_AS(qd_run(bad), std::invalid_argument);
}

TEST_CASE("constant fitness: the first arrival holds its cell forever") {
    RunConfig config;
    config.objective = constant_objective();
    config.container.kind = ContainerKind::Grid;
    config.container.grid_bins = {3, 3};
    config.init_count = 10;
    config.iterations = 30;
    config.batch_size = 8;
    config.seed = 3;
    const auto result = qd_run(config);
    REQUIRE(result.container->size() == 1);  // single descriptor, single cell
    CHECK(result.container->elites()[0].individual->eval_index == 0);  // tie never replaces
}

TEST_CASE("discrete toy run reaches the brute-force per-cell optimum") {
    // 3-bit effective genotype: each component snaps to {0,1}; descriptor is
    // the first snapped bit, fitness a known function of the bit pattern
    ObjectiveSpec spec;
    spec.genotype_bounds = Bounds(3, Interval{0.0, 1.0});
    spec.descriptor_bounds = Bounds(1, Interval{0.0, 1.0});
    spec.evaluator = [](const Genotype& g, RngStream&) {
        const int b0 = g[0] >= 0.5, b1 = g[1] >= 0.5, b2 = g[2] >= 0.5;
        const int pattern = b0 * 4 + b1 * 2 + b2;
        const double fitness = std::sin(1.0 + 2.0 * pattern);  // distinct per pattern
        return std::make_pair(fitness, Descriptor{b0 ? 1.0 : 0.0});
    };

    // enumeration oracle over all 8 patterns
    double best_per_cell[2] = {-2.0, -2.0};
    for (int pattern = 0; pattern < 8; ++pattern) {
        const double fitness = std::sin(1.0 + 2.0 * pattern);
        best_per_cell[pattern >> 2] = std::max(best_per_cell[pattern >> 2], fitness);
    }

    RunConfig config;
    config.objective = spec;
    config.container.kind = ContainerKind::Grid;
    config.container.grid_bins = {2};
    config.init_count = 64;  // covers all 8 patterns with overwhelming probability
    config.iterations = 20;
    config.batch_size = 16;
    config.seed = 7;
    config.variation.sigma1 = 0.3;
    const auto result = qd_run(config);

    REQUIRE(result.container->size() == 2);
    for (const auto& e : result.container->elites())
        CHECK(e.individual->fitness == best_per_cell[e.key]);
}

TEST_CASE("map_elites equals qd_run with the corresponding explicit config") {
    const auto objective = make_arm_objective(4);
    const GridSpec grid{{8, 8}, objective.descriptor_bounds};
    const auto preset = map_elites(grid, objective, 50, 30, 16, 11);

    RunConfig config;
    config.objective = objective;
    config.container.kind = ContainerKind::Grid;
    config.container.grid_bins = {8, 8};
    config.selector.kind = SelectorKind::Uniform;
    config.init_count = 50;
    config.iterations = 30;
    config.batch_size = 16;
    config.seed = 11;
    const auto direct = qd_run(config);

    CHECK(same_archive(*preset.container, *direct.container));
    REQUIRE(preset.metrics.size() == direct.metrics.size());
    for (std::size_t i = 0; i < preset.metrics.size(); ++i) {
        CHECK(preset.metrics[i].qd_score == direct.metrics[i].qd_score);
        CHECK(preset.metrics[i].coverage == direct.metrics[i].coverage);
    }
}

TEST_CASE("same seed reproduces the archive; different seed does not") {
    const auto a = qd_run(small_arm_config(21));
    const auto b = qd_run(small_arm_config(21));
    const auto c = qd_run(small_arm_config(22));
    CHECK(same_archive(*a.container, *b.container));
    CHECK_FALSE(same_archive(*a.container, *c.container));
}

TEST_CASE("thread count does not change the result") {
    RunConfig serial = small_arm_config(31);
    RunConfig threaded = small_arm_config(31);
    threaded.threads = 4;
    const auto a = qd_run(serial);
    const auto b = qd_run(threaded);
    CHECK(same_archive(*a.container, *b.container));
    CHECK(a.descriptor_clamp_events == b.descriptor_clamp_events);
}

TEST_CASE("a smooth toy with ample budget fills all 25 cells") {
    RunConfig config;
    config.objective = make_illumination_objective(2);
    config.container.kind = ContainerKind::Grid;
    config.container.grid_bins = {5, 5};
    config.init_count = 500;
    config.iterations = 100;
    config.batch_size = 50;
    config.seed = 5;
    const auto result = qd_run(config);
    CHECK(coverage(*result.container).value() == 1.0);
}

TEST_CASE("coverage and offset QD-score are non-decreasing for grid and CVT") {
    for (auto kind : {ContainerKind::Grid, ContainerKind::Cvt}) {
        RunConfig config = small_arm_config(41);
        config.container.kind = kind;
        config.container.cvt_cells = 64;
        config.container.cvt_samples = 6400;
        const auto result = qd_run(config);
        REQUIRE(result.metrics.size() > 2);
        for (std::size_t i = 1; i < result.metrics.size(); ++i) {
            CHECK(result.metrics[i].coverage.value() >= result.metrics[i - 1].coverage.value());
            CHECK(result.metrics[i].qd_score_offset >= result.metrics[i - 1].qd_score_offset - 1e-9);
        }
    }
}

TEST_CASE("deep grid: coverage non-decreasing, cell sizes within depth") {
    RunConfig config = small_arm_config(51);
    config.container.kind = ContainerKind::DeepGrid;
    config.container.depth = 5;
    config.selector.kind = SelectorKind::DeepGridRank;
    const auto result = qd_run(config);
    for (std::size_t i = 1; i < result.metrics.size(); ++i)
        CHECK(result.metrics[i].coverage.value() >= result.metrics[i - 1].coverage.value());
    const auto& deep = dynamic_cast<const DeepGridContainer&>(*result.container);
    for (const auto& [linear, cell] : deep.cells()) CHECK(cell.size() <= 5);
}

TEST_CASE("every archived individual was produced by the run") {
    const auto result = qd_run(small_arm_config(61));
    for (const auto& e : result.container->all_stored()) {
        CHECK(e.individual->eval_index >= 0);
        CHECK(e.individual->eval_index < result.total_evaluations);
    }
}

TEST_CASE("evaluation failures abort with the iteration in the diagnostic") {
    RunConfig config = small_arm_config(71);
    auto counter = std::make_shared<int>(0);
    config.objective.evaluator = [counter](const Genotype& g, RngStream&) {
        *counter += 1;
        const double fitness = *counter > 80 ? std::nan("") : -std::abs(g[0]);
        return std::make_pair(fitness, Descriptor{0.5, 0.5});
    };
    try {
        qd_run(config);
        FAIL("expected EvaluationError");
    } catch (const EvaluationError& e) {
        CHECK(std::string(e.what()).find("iteration") != std::string::npos);
    }
}

TEST_CASE("weighted and random-genotype selectors run deterministically") {
    for (auto kind : {SelectorKind::Weighted, SelectorKind::RandomGenotype}) {
        RunConfig config = small_arm_config(81);
        config.selector.kind = kind;
        config.selector.score = ScoreKind::Curiosity;
        const auto a = qd_run(config);
        const auto b = qd_run(config);
        CHECK(same_archive(*a.container, *b.container));
        CHECK(a.total_evaluations == 50 + 40 * 16);
    }
}

TEST_CASE("novelty-weighted selection refreshes novelty scores") {
    RunConfig config = small_arm_config(91);
    config.selector.kind = SelectorKind::Weighted;
    config.selector.score = ScoreKind::Novelty;
    config.novelty_k = 3;
    const auto result = qd_run(config);
    bool any_nonzero = false;
    for (const auto& e : result.container->elites()) any_nonzero |= e.individual->novelty > 0.0;
    CHECK(any_nonzero);
}

TEST_CASE("selection can include the previous batch when configured") {
    RunConfig config = small_arm_config(101);
    config.select_from_previous_batch = true;
    const auto a = qd_run(config);
    const auto b = qd_run(config);
    CHECK(same_archive(*a.container, *b.container));
    // widening the pool changes the draw sequence relative to the default
    RunConfig plain = small_arm_config(101);
    const auto c = qd_run(plain);
    CHECK_FALSE(same_archive(*a.container, *c.container));
}

TEST_CASE("checkpoints are written at the configured cadence") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "qd_engine_ckpt_test";
    fs::remove_all(dir);
    RunConfig config = small_arm_config(111);
    config.iterations = 10;
    config.checkpoint_every = 5;
    config.checkpoint_dir = dir.string();
    qd_run(config);
    CHECK(fs::exists(dir / "checkpoint_000005.csv"));
    CHECK(fs::exists(dir / "checkpoint_000010.csv"));
    CHECK(fs::exists(dir / "checkpoint_000010.state"));
    fs::remove_all(dir);
}

TEST_CASE("curiosity scores respond to add outcomes") {
    RunConfig config = small_arm_config(121);
    config.selector.kind = SelectorKind::Weighted;
    config.selector.score = ScoreKind::Curiosity;
    const auto result = qd_run(config);
    bool any_changed = false;
    for (const auto& e : result.container->elites()) {
        CHECK(e.individual->curiosity >= config.curiosity.floor);
        any_changed |= e.individual->curiosity != 0.0;
    }
    CHECK(any_changed);
}
