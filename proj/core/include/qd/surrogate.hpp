#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include <qd/containers.hpp>
#include <qd/engine.hpp>
#include <qd/gp.hpp>
#include <qd/grid.hpp>
#include <qd/types.hpp>

namespace qd {

/// Upper confidence bound: mu(x) + beta * sigma(x). beta >= 0 trades off
/// exploitation (small beta) against exploration (large beta).
double ucb(const GpModel& model, const Genotype& x, double beta);

/// Closed-form expected improvement over `incumbent`:
///   z = (mu - f*) / sigma,  EI = (mu - f*) Phi(z) + sigma phi(z),
/// degenerating to max(0, mu - f*) when sigma = 0. Always >= 0.
double expected_improvement(const GpModel& model, const Genotype& x, double incumbent);

/// Expected joint improvement of elites: the sum over grid cells of the
/// probability that x's descriptor lands in the cell times the expected
/// improvement over that cell's incumbent. Membership probabilities come
/// from independent per-dimension descriptor models, integrating each
/// Gaussian posterior over the cell's box. Empty cells use
/// `empty_incumbent`.
double ejie(const GpModel& fitness_model, const std::vector<GpModel>& descriptor_models,
            const Genotype& x, const GridSpec& grid,
            const std::map<std::uint64_t, double>& cell_incumbents, double empty_incumbent);

/// Incumbent floor for cells that have no elite yet: the minimum observed
/// fitness minus one sample standard deviation.
double default_empty_incumbent(const std::vector<double>& observed_fitness);

struct AcquisitionMapConfig {
    GridSpec grid;
    double beta = 1.0;
    std::int64_t init_count = 200;
    std::int64_t iterations = 100;  // 0 = keep only the initialized candidates
    std::int64_t batch_size = 32;
    VariationConfig variation;
    std::uint64_t seed = 1;
};

/// Grid of candidates that maximize UCB per cell ("acquisition map"). The
/// stored fitness values are UCB values, not true fitness.
struct AcquisitionMap {
    std::unique_ptr<GridContainer> grid;
    std::int64_t ucb_evaluations = 0;
};

/// Run MAP-Elites with UCB(model) as the objective. Descriptors come from
/// `descriptor_fn` (the cheap, known mapping when one exists) or, if
/// descriptor models are supplied, from their posterior means.
AcquisitionMap build_acquisition_map(const GpModel& fitness_model,
                                     const std::function<Descriptor(const Genotype&)>& descriptor_fn,
                                     const std::vector<GpModel>* descriptor_models,
                                     const Bounds& genotype_bounds, const AcquisitionMapConfig& config);

struct SailConfig {
    GridSpec grid;
    std::int64_t total_budget = 500;   // true evaluations, including the design
    std::int64_t init_samples = 100;   // initial random design
    std::int64_t batch_per_round = 25;
    double beta = 1.0;
    GpConfig gp;
    AcquisitionMapConfig inner;  // inner run settings; grid/beta/seed are overwritten
    std::uint64_t seed = 1;
    bool descriptor_from_gp = false;  // default: true descriptor function
    int threads = 1;

    void validate() const;
};

struct SailRoundRecord {
    int round = 0;
    double map_coverage = 0.0;  // acquisition-map coverage (0 for the design round)
    /// True-archive metrics snapshot; iteration = round, evaluations = true
    /// evaluations spent so far.
    MetricsRecord archive;
};

struct SailResult {
    std::unique_ptr<GridContainer> archive;  // true-fitness archive
    std::vector<SailRoundRecord> rounds;
    std::int64_t total_evaluations = 0;
    double wall_seconds = 0.0;
};

/// Surrogate-assisted illumination: fit a GP on all true evaluations, build
/// an acquisition map from UCB, draw the next batch uniformly from the
/// map's cells (skipping genotypes already evaluated), evaluate it on the
/// true objective and repeat until the budget is spent. Only true
/// evaluations ever enter the returned archive.
SailResult sail(const ObjectiveSpec& objective, const SailConfig& config);

/// Round log CSV: round, true evaluations so far, acquisition-map coverage,
/// true-archive QD-scores.
void export_sail_rounds_csv(const std::vector<SailRoundRecord>& rounds, const std::string& path);

}  // namespace qd
