#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include <qd/evaluate.hpp>
#include <qd/tasks.hpp>

using namespace qd;

namespace {

constexpr double kPi = std::numbers::pi;

std::pair<double, Descriptor> eval_once(const ObjectiveSpec& spec, const Genotype& g) {
    RngStream rng(0, StreamPurpose::Generic);
    return spec.evaluator(g, rng);
}

}  // namespace

TEST_CASE("arm forward kinematics on known poses") {
    const std::vector<double> lengths{0.5, 0.5};
    auto [x1, y1] = arm_forward_kinematics({0.0, 0.0}, lengths);
    CHECK(x1 == doctest::Approx(1.0));
    CHECK(y1 == doctest::Approx(0.0));

    auto [x2, y2] = arm_forward_kinematics({kPi / 2, 0.0}, lengths);
    CHECK(x2 == doctest::Approx(0.0));
    CHECK(y2 == doctest::Approx(1.0));

    auto [x3, y3] = arm_forward_kinematics({kPi / 2, -kPi / 2}, lengths);
    CHECK(x3 == doctest::Approx(0.5));
    CHECK(y3 == doctest::Approx(0.5));

    CHECK_THROWS_AS(arm_forward_kinematics({0.0}, lengths), std::invalid_argument);
}

TEST_CASE("arm endpoint never leaves the disc of radius sum(lengths)") {
    const auto spec = make_arm_objective(8);
    RngStream rng(1, StreamPurpose::Generic);
    for (int i = 0; i < 2000; ++i) {
        Genotype angles(8);
        for (auto& a : angles) a = rng.uniform(-kPi, kPi);
        const auto [fitness, desc] = eval_once(spec, angles);
        const double x = 2.0 * desc[0] - 1.0, y = 2.0 * desc[1] - 1.0;
        CHECK(x * x + y * y <= 1.0 + 1e-12);
        CHECK(fitness <= 0.0);
        CHECK(fitness >= -kPi);
    }
}

TEST_CASE("arm objective: smooth postures score best") {
    const auto spec = make_arm_objective(2);
    // equal angles: zero deviation
    CHECK(eval_once(spec, {0.7, 0.7}).first == doctest::Approx(0.0));
    // two-point standard deviation |a1 - a2| / 2
    CHECK(eval_once(spec, {0.0, kPi}).first == doctest::Approx(-kPi / 2));
    // straight arm lands at descriptor (1.0, 0.5)
    const auto desc = eval_once(spec, {0.0, 0.0}).second;
    CHECK(desc[0] == doctest::Approx(1.0));
    CHECK(desc[1] == doctest::Approx(0.5));
}

TEST_CASE("illumination task: center optimum, non-positive fitness, identity descriptor") {
    const auto spec = make_illumination_objective(6);
    const Genotype center(6, 0.5);
    CHECK(eval_once(spec, center).first == doctest::Approx(0.0).epsilon(1e-9));

    RngStream rng(2, StreamPurpose::Generic);
    for (int i = 0; i < 1000; ++i) {
        Genotype g(6);
        for (auto& v : g) v = rng.next_double();
        const auto [fitness, desc] = eval_once(spec, g);
        CHECK(fitness <= 1e-12);
        CHECK(desc == Descriptor{g[0], g[1]});
        CHECK(fitness >= spec.fitness_lower_bound);
    }
}

TEST_CASE("noisy wrapper: zero noise is the identity, fitness noise has the right scale") {
    const auto base = make_arm_objective(4);
    const auto clean = noisy_wrapper(base, 0.0, 0.0);
    const Genotype pose{0.1, -0.2, 0.3, 0.0};
    CHECK(eval_once(clean, pose) == eval_once(base, pose));
    CHECK_FALSE(clean.noisy);

    const auto noisy = noisy_wrapper(base, 0.1, 0.0);
    CHECK(noisy.noisy);
    const double truth = eval_once(base, pose).first;
    const int n = 100000;
    double sum = 0.0, sum2 = 0.0;
    RngStream noise_streams(3, StreamPurpose::Generic);
    for (int i = 0; i < n; ++i) {
        RngStream per_eval(3, StreamPurpose::EvalNoise, static_cast<std::uint64_t>(i));
        const double f = noisy.evaluator(pose, per_eval).first;
        sum += f - truth;
        sum2 += (f - truth) * (f - truth);
    }
    const double mean = sum / n;
    const double stddev = std::sqrt(sum2 / n - mean * mean);
    CHECK(std::abs(stddev - 0.1) / 0.1 < 0.05);

    CHECK_THROWS_AS(noisy_wrapper(base, -0.1, 0.0), std::invalid_argument);
}

TEST_CASE("descriptor noise drives clamp events up") {
    const auto base = make_arm_objective(4);
    EvalContext quiet_ctx, loud_ctx;
    std::vector<Genotype> batch(200, Genotype{0.0, 0.0, 0.0, 0.0});
    evaluate_batch(noisy_wrapper(base, 0.0, 0.0), batch, quiet_ctx, 5);
    evaluate_batch(noisy_wrapper(base, 0.0, 5.0), batch, loud_ctx, 5);
    CHECK(quiet_ctx.descriptor_clamp_events == 0);
    CHECK(loud_ctx.descriptor_clamp_events > 100);
}

TEST_CASE("exhaustive oracle on tiny lattices") {
    ObjectiveSpec spec;
    spec.name = "line";
    spec.genotype_bounds = Bounds(1, Interval{0.0, 1.0});
    spec.descriptor_bounds = Bounds(2, Interval{0.0, 1.0});
    spec.evaluator = [](const Genotype& g, RngStream&) {
        return std::make_pair(g[0], Descriptor{0.5, 0.5});
    };

    SUBCASE("two points into one cell keeps the better") {
        GridContainer grid(GridSpec{{1, 1}, Bounds(2, Interval{0.0, 1.0})});
        exhaustive_oracle(spec, LatticeSpec{{2}}, grid);
        REQUIRE(grid.size() == 1);
        CHECK(grid.elites()[0].individual->fitness == 1.0);
    }

    SUBCASE("single-point lattice holds exactly that point") {
        GridContainer grid(GridSpec{{1, 1}, Bounds(2, Interval{0.0, 1.0})});
        exhaustive_oracle(spec, LatticeSpec{{1}}, grid);
        REQUIRE(grid.size() == 1);
        CHECK(grid.elites()[0].individual->fitness == 0.0);  // lone point at the lower bound
        CHECK(grid.elites()[0].individual->genotype == Genotype{0.0});
    }

    SUBCASE("budget guard") {
        GridContainer grid(GridSpec{{1, 1}, Bounds(2, Interval{0.0, 1.0})});
        CHECK_THROWS_AS(exhaustive_oracle(spec, LatticeSpec{{20000000}}, grid),
                        std::invalid_argument);
    }
}

TEST_CASE("oracle equals a container-free per-cell maximum on the illumination task") {
    const auto spec = make_illumination_objective(2);
    const GridSpec grid_spec{{5, 5}, spec.descriptor_bounds};
    GridContainer grid(grid_spec);
    exhaustive_oracle(spec, LatticeSpec{{11, 11}}, grid);

    std::map<std::uint64_t, double> brute;
    for (int i = 0; i < 11; ++i)
        for (int j = 0; j < 11; ++j) {
            const Genotype g{i / 10.0, j / 10.0};
            const auto [fitness, desc] = eval_once(spec, g);
            const auto key = grid_linear_cell(desc, grid_spec);
            auto it = brute.find(key);
            if (it == brute.end() || fitness > it->second) brute[key] = fitness;
        }

    REQUIRE(grid.size() == brute.size());
    for (const auto& [key, fitness] : brute) {
        REQUIRE(grid.at_cell(key) != nullptr);
        CHECK(grid.at_cell(key)->fitness == fitness);  // exact, zero tolerance
    }
}

TEST_CASE("oracle result is order-invariant for distinct fitness values") {
    const auto spec = make_illumination_objective(2);
    const GridSpec grid_spec{{4, 4}, spec.descriptor_bounds};

    std::vector<Genotype> lattice;
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j) lattice.push_back({i / 8.0, j / 8.0});

    GridContainer forward(grid_spec), shuffled(grid_spec);
    RngStream add(1, StreamPurpose::ContainerAdd);
    EvalContext ctx_a, ctx_b;
    for (auto& ind : evaluate_batch(spec, lattice, ctx_a, 0)) forward.add(ind, add);

    std::reverse(lattice.begin(), lattice.end());
    for (auto& ind : evaluate_batch(spec, lattice, ctx_b, 0)) shuffled.add(ind, add);

    REQUIRE(forward.size() == shuffled.size());
    for (const auto& e : forward.elites())
        CHECK(shuffled.at_cell(e.key)->fitness == e.individual->fitness);
}
