#include <qd/variation.hpp>

#include <cmath>
#include <stdexcept>

namespace qd {

void VariationConfig::validate() const {
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2))
        throw std::invalid_argument("VariationConfig: sigma2 must be finite and >= 0");
    if (sigma1 >= 0.0 && !std::isfinite(sigma1))
        throw std::invalid_argument("VariationConfig: sigma1 must be finite");
    const double sum = mix_iso + mix_directional + mix_blend;
    if (mix_iso < 0.0 || mix_directional < 0.0 || mix_blend < 0.0 || std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("VariationConfig: operator mix weights must be >= 0 and sum to 1");
}

double VariationConfig::resolved_sigma1(const Bounds& genotype_bounds) const {
    return sigma1 >= 0.0 ? sigma1 : 0.01 * genotype_bounds.mean_width();
}

namespace {

void check_same_dim(const Genotype& a, const Genotype& b, const char* who) {
    if (a.size() != b.size()) throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

}  // namespace

Genotype mutate_iso(const Genotype& parent, double sigma1, RngStream& rng, const Bounds& bounds) {
    Genotype child(parent.size());
    for (std::size_t i = 0; i < parent.size(); ++i) child[i] = parent[i] + sigma1 * rng.next_normal();
    clamp_to_bounds(child, bounds);
    return child;
}

Genotype variation_directional(const Genotype& parent_i, const Genotype& parent_j, double sigma1,
                               double sigma2, RngStream& rng, const Bounds& bounds) {
    check_same_dim(parent_i, parent_j, "variation_directional");
    Genotype child(parent_i.size());
    for (std::size_t i = 0; i < parent_i.size(); ++i)
        child[i] = parent_i[i] + sigma1 * rng.next_normal();
    const double line = rng.next_normal();
    for (std::size_t i = 0; i < parent_i.size(); ++i)
        child[i] += sigma2 * (parent_j[i] - parent_i[i]) * line;
    clamp_to_bounds(child, bounds);
    return child;
}

Genotype crossover_blend(const Genotype& parent_i, const Genotype& parent_j, RngStream& rng,
                         const Bounds& bounds) {
    check_same_dim(parent_i, parent_j, "crossover_blend");
    const double alpha = rng.next_double();
    Genotype child(parent_i.size());
    for (std::size_t i = 0; i < parent_i.size(); ++i)
        child[i] = alpha * parent_i[i] + (1.0 - alpha) * parent_j[i];
    clamp_to_bounds(child, bounds);
    return child;
}

std::vector<Genotype> vary(const std::vector<Genotype>& parents, const VariationConfig& config,
                           const Bounds& bounds, std::uint64_t seed,
                           std::uint64_t first_stream_index) {
    config.validate();
    const double sigma1 = config.resolved_sigma1(bounds);

    std::vector<Genotype> offspring;
    offspring.reserve(parents.size());
    for (std::size_t o = 0; o < parents.size(); ++o) {
        RngStream rng(seed, StreamPurpose::Variation, first_stream_index + o);
        const double op = rng.next_double();
        if (op < config.mix_iso) {
            offspring.push_back(mutate_iso(parents[o], sigma1, rng, bounds));
        } else {
            const Genotype& co = parents[rng.uniform_index(parents.size())];
            if (op < config.mix_iso + config.mix_directional)
                offspring.push_back(variation_directional(parents[o], co, sigma1, config.sigma2, rng, bounds));
            else
                offspring.push_back(crossover_blend(parents[o], co, rng, bounds));
        }
    }
    return offspring;
}

}  // namespace qd
