#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <qd/containers.hpp>
#include <qd/metrics.hpp>
#include <qd/selection.hpp>
#include <qd/types.hpp>
#include <qd/variation.hpp>

namespace qd {

enum class ContainerKind { Grid, Cvt, Distance, DeepGrid };

struct ContainerConfig {
    ContainerKind kind = ContainerKind::Grid;
    std::vector<int> grid_bins;  // grid / deep-grid
    int cvt_cells = 0;           // CVT k
    std::uint64_t cvt_samples = 0;  // CVT K; 0 = 100 * k
    std::uint64_t cvt_seed = 1;
    std::string cvt_cache_dir;   // empty = rebuild, no cache
    /// Prebuilt tessellation; takes precedence over the cvt_* fields.
    std::shared_ptr<const CentroidSet> centroids;
    double distance_threshold = 0.05;
    int depth = 50;  // deep-grid D
};

/// Build a container over the objective's descriptor box.
std::unique_ptr<Container> make_container(const ContainerConfig& config,
                                          const Bounds& descriptor_bounds);

enum class SelectorKind {
    Uniform,         // uniform over the elite view
    Weighted,        // score-weighted over the elite view
    RandomGenotype,  // fresh uniform genotypes, ignoring the container
    DeepGridRank,    // uniform cell, rank-weighted within the cell
};

struct SelectorConfig {
    SelectorKind kind = SelectorKind::Uniform;
    ScoreKind score = ScoreKind::Curiosity;
};

struct RunConfig {
    ObjectiveSpec objective;
    ContainerConfig container;
    SelectorConfig selector;
    VariationConfig variation;
    std::int64_t init_count = 100;  // G random genotypes before the loop
    std::int64_t iterations = 100;  // I
    std::int64_t batch_size = 64;
    std::uint64_t seed = 1;
    int metrics_every = 1;   // iterations between metrics records
    int novelty_k = 15;
    int novelty_refresh_every = 1;  // when novelty is in use
    int knn_k = 15;
    CuriosityConfig curiosity;
    bool select_from_previous_batch = false;  // widen the pool with the last batch
    int threads = 1;
    int checkpoint_every = 0;  // iterations between checkpoints; 0 = off
    std::string checkpoint_dir;

    void validate() const;
};

struct RunResult {
    std::unique_ptr<Container> container;
    std::vector<MetricsRecord> metrics;
    std::int64_t total_evaluations = 0;
    std::int64_t descriptor_clamp_events = 0;
    double wall_seconds = 0.0;
};

/// The generic QD loop: random initialization, then I iterations of
/// select -> vary -> evaluate -> add (with curiosity updates) -> refresh
/// scores -> record metrics. Deterministic for a fixed seed regardless of
/// the evaluation thread count.
RunResult qd_run(const RunConfig& config);

/// Classic MAP-Elites: the QD loop preset with a grid container, uniform
/// selection over the elites, and the default variation mix.
RunResult map_elites(const GridSpec& grid, const ObjectiveSpec& objective, std::int64_t init_count,
                     std::int64_t iterations, std::int64_t batch_size, std::uint64_t seed);

}  // namespace qd
