#pragma once

#include <cstdint>
#include <vector>

#include <qd/rng.hpp>
#include <qd/types.hpp>

namespace qd {

/// Offspring generation settings. Operator mix weights must sum to 1.
struct VariationConfig {
    double sigma1 = -1.0;  // isotropic scale; negative = derive 0.01 * mean bound width
    double sigma2 = 0.2;   // directional scale (dimensionless)
    double mix_iso = 0.5;
    double mix_directional = 0.5;
    double mix_blend = 0.0;

    void validate() const;
    /// Resolve sigma1 < 0 to the default derived from the genotype bounds.
    double resolved_sigma1(const Bounds& genotype_bounds) const;
};

/// child = clamp(parent + sigma1 * N(0, I))
Genotype mutate_iso(const Genotype& parent, double sigma1, RngStream& rng, const Bounds& bounds);

/// child = clamp(parent_i + sigma1 * N(0, I) + sigma2 * (parent_j - parent_i) * N(0, 1)),
/// the isotropic vector draw and the scalar line draw being independent.
Genotype variation_directional(const Genotype& parent_i, const Genotype& parent_j, double sigma1,
                               double sigma2, RngStream& rng, const Bounds& bounds);

/// child = clamp(alpha * parent_i + (1 - alpha) * parent_j), one alpha ~ U[0,1]
/// shared across coordinates.
Genotype crossover_blend(const Genotype& parent_i, const Genotype& parent_j, RngStream& rng,
                         const Bounds& bounds);

/// One offspring per parent; the operator is drawn per offspring from the
/// configured mix, and directional/blend draw their co-parent uniformly from
/// the parent list. Offspring o consumes only its own derived stream
/// (seed, Variation, first_stream_index + o), so batches are reproducible
/// under any evaluation parallelism.
std::vector<Genotype> vary(const std::vector<Genotype>& parents, const VariationConfig& config,
                           const Bounds& bounds, std::uint64_t seed,
                           std::uint64_t first_stream_index);

}  // namespace qd
