#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <qd/containers.hpp>

namespace qd {

/// One row of the per-cadence metrics log.
struct MetricsRecord {
    std::int64_t iteration = 0;
    std::int64_t evaluations = 0;
    std::optional<double> coverage;  // absent for containers without a fixed cell set
    std::int64_t entries = 0;        // stored individuals (the archive size)
    double qd_score = 0.0;           // raw sum of elite fitness
    double qd_score_offset = 0.0;    // sum of (fitness - declared lower bound), non-negative
    double max_fitness = 0.0;
    double mean_fitness = 0.0;
    std::optional<double> knn_density;  // distance archives only
};

/// Fraction of cells occupied; nullopt for containers without a fixed cell
/// count (distance archives report their entry count instead).
std::optional<double> coverage(const Container& container);

/// Sum of elite fitness values.
double qd_score(const Container& container);

/// Sum of (fitness - fitness_lower_bound) over the elites. With the bound
/// declared per benchmark this variant is non-negative and grows under both
/// coverage gains and fitness improvements, so it is the one used for
/// monotonicity checks and cross-run comparisons.
double qd_score_offset(const Container& container, double fitness_lower_bound);

/// Mean over entries of the mean distance to their k nearest fellow entries
/// (k truncated to entries-1). Requires at least 2 entries.
double knn_density(const Container& container, int k);

/// Snapshot all scalar metrics of a container.
MetricsRecord collect_metrics(const Container& container, std::int64_t iteration,
                              std::int64_t evaluations, double fitness_lower_bound,
                              int knn_k = 15);

}  // namespace qd
