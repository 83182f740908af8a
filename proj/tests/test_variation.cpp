#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include <qd/variation.hpp>

using namespace qd;

namespace {

const Bounds kWide(2, Interval{-100.0, 100.0});

}  // namespace

TEST_CASE("zero sigma mutation is the identity") {
    RngStream rng(1, StreamPurpose::Variation);
    const Genotype parent{0.3, -0.7};
    CHECK(mutate_iso(parent, 0.0, rng, kWide) == parent);
}

TEST_CASE("mutation respects bounds even from a boundary parent") {
    const Bounds unit(2, Interval{0.0, 1.0});
    RngStream rng(2, StreamPurpose::Variation);
    const Genotype parent{0.0, 1.0};
    for (int i = 0; i < 2000; ++i) {
        const auto child = mutate_iso(parent, 0.5, rng, unit);
        CHECK(unit.contains(child));
    }
}

TEST_CASE("iso mutation noise has variance sigma1^2 per coordinate") {
    RngStream rng(3, StreamPurpose::Variation);
    const Genotype parent{0.0, 0.0};
    const double sigma1 = 0.8;
    const int n = 100000;
    double sum[2] = {0, 0}, sum2[2] = {0, 0};
    for (int i = 0; i < n; ++i) {
        const auto child = mutate_iso(parent, sigma1, rng, kWide);
        for (int d = 0; d < 2; ++d) {
            sum[d] += child[static_cast<std::size_t>(d)];
            sum2[d] += child[static_cast<std::size_t>(d)] * child[static_cast<std::size_t>(d)];
        }
    }
    for (int d = 0; d < 2; ++d) {
        const double mean = sum[d] / n;
        const double var = sum2[d] / n - mean * mean;
        CHECK(std::abs(var - sigma1 * sigma1) / (sigma1 * sigma1) < 0.05);
    }
}

TEST_CASE("directional variation: degenerate cases") {
    const Genotype pi{1.0, 2.0}, pj{3.0, -1.0};
    RngStream rng(4, StreamPurpose::Variation);
    CHECK(variation_directional(pi, pj, 0.0, 0.0, rng, kWide) == pi);

    // equal parents reduce exactly to isotropic mutation (same draws)
    RngStream ra(5, StreamPurpose::Variation), rb(5, StreamPurpose::Variation);
    const auto directional = variation_directional(pi, pi, 0.4, 0.7, ra, kWide);
    const auto iso = mutate_iso(pi, 0.4, rb, kWide);
    CHECK(directional == iso);

    CHECK_THROWS_AS(variation_directional({1.0}, pj, 0.1, 0.1, rng, kWide), std::invalid_argument);
}

TEST_CASE("directional variation matches its declared mean and covariance") {
    const Genotype pi{0.0, 0.0}, pj{1.0, 2.0};
    const double s1 = 0.5, s2 = 0.3;
    const int n = 100000;
    // expected covariance: s1^2 I + s2^2 d d^T with d = pj - pi
    const double expected[2][2] = {{s1 * s1 + s2 * s2 * 1.0, s2 * s2 * 2.0},
                                   {s2 * s2 * 2.0, s1 * s1 + s2 * s2 * 4.0}};

    RngStream rng(6, StreamPurpose::Variation);
    std::vector<std::array<double, 2>> samples;
    samples.reserve(n);
    double mean[2] = {0, 0};
    for (int i = 0; i < n; ++i) {
        const auto child = variation_directional(pi, pj, s1, s2, rng, kWide);
        samples.push_back({child[0], child[1]});
        mean[0] += child[0];
        mean[1] += child[1];
    }
    mean[0] /= n;
    mean[1] /= n;

    // sample mean within 3 standard errors of parent_i
    for (int d = 0; d < 2; ++d) {
        const double se = std::sqrt(expected[d][d] / n);
        CHECK(std::abs(mean[d] - pi[static_cast<std::size_t>(d)]) < 3.0 * se);
    }

    double cov[2][2] = {{0, 0}, {0, 0}};
    for (const auto& s : samples)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) cov[a][b] += (s[a] - mean[a]) * (s[b] - mean[b]);
    double err = 0.0, norm = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            cov[a][b] /= n;
            err += (cov[a][b] - expected[a][b]) * (cov[a][b] - expected[a][b]);
            norm += expected[a][b] * expected[a][b];
        }
    CHECK(std::sqrt(err / norm) < 0.05);  // relative Frobenius error
}

TEST_CASE("blend crossover stays in the spanned box and handles equality") {
    RngStream rng(7, StreamPurpose::Variation);
    const Genotype pi{1.0, 5.0}, pj{3.0, -2.0};
    for (int i = 0; i < 500; ++i) {
        const auto child = crossover_blend(pi, pj, rng, kWide);
        CHECK(child[0] >= 1.0);
        CHECK(child[0] <= 3.0);
        CHECK(child[1] >= -2.0);
        CHECK(child[1] <= 5.0);
        // one shared alpha across coordinates
        const double alpha = (child[0] - pj[0]) / (pi[0] - pj[0]);
        CHECK(child[1] == doctest::Approx(alpha * pi[1] + (1 - alpha) * pj[1]).epsilon(1e-12));
    }
    const auto same = crossover_blend(pi, pi, rng, kWide);
    CHECK(same == pi);
}

TEST_CASE("vary produces one offspring per parent with a pure-iso mix") {
    VariationConfig config;
    config.sigma1 = 0.2;
    config.mix_iso = 1.0;
    config.mix_directional = 0.0;
    config.mix_blend = 0.0;

    std::vector<Genotype> parents;
    for (int i = 0; i < 64; ++i) parents.push_back({0.01 * i, -0.01 * i});

    const auto offspring = vary(parents, config, kWide, 42, 1000);
    REQUIRE(offspring.size() == 64);

    // replicate the per-offspring stream logic: op pick, then iso draws
    for (std::size_t o = 0; o < parents.size(); ++o) {
        RngStream rng(42, StreamPurpose::Variation, 1000 + o);
        (void)rng.next_double();  // the operator pick
        CHECK(offspring[o] == mutate_iso(parents[o], 0.2, rng, kWide));
    }
}

TEST_CASE("vary is deterministic and respects bounds under every mix") {
    VariationConfig config;
    config.sigma1 = 0.5;
    config.mix_iso = 0.3;
    config.mix_directional = 0.5;
    config.mix_blend = 0.2;

    const Bounds unit(2, Interval{0.0, 1.0});
    std::vector<Genotype> parents{{0.0, 0.0}, {1.0, 1.0}, {0.5, 0.2}, {0.9, 0.1}};
    const auto a = vary(parents, config, unit, 7, 0);
    const auto b = vary(parents, config, unit, 7, 0);
    CHECK(a == b);
    for (const auto& child : a) CHECK(unit.contains(child));

    const auto c = vary(parents, config, unit, 8, 0);
    CHECK(a != c);
}

TEST_CASE("vary with zero sigmas and no crossover is the identity") {
    VariationConfig config;
    config.sigma1 = 0.0;
    config.sigma2 = 0.0;
    config.mix_iso = 0.5;
    config.mix_directional = 0.5;
    config.mix_blend = 0.0;
    std::vector<Genotype> parents{{0.1, 0.9}, {0.4, 0.3}};
    CHECK(vary(parents, config, Bounds(2, Interval{0.0, 1.0}), 3, 0) == parents);
}

TEST_CASE("config validation and the derived sigma1 default") {
    VariationConfig config;
    config.mix_iso = 0.6;  // mix no longer sums to 1
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);

    VariationConfig defaults;
    CHECK(defaults.resolved_sigma1(Bounds(3, Interval{0.0, 2.0})) == doctest::Approx(0.02));
    defaults.sigma1 = 0.5;
    CHECK(defaults.resolved_sigma1(Bounds(3, Interval{0.0, 2.0})) == 0.5);
}
