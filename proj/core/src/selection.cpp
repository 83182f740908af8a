#include <qd/selection.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace qd {

namespace {

constexpr double kWeightEpsilon = 1e-6;

std::vector<Elite> build_pool(const Container& container,
                              const std::vector<const Individual*>& extra_pool) {
    std::vector<Elite> pool = container.elites();
    for (const Individual* ind : extra_pool) pool.push_back({kDetachedParentKey, ind});
    return pool;
}

SelectedParent take(Container& container, const Elite& e) {
    if (e.key != kDetachedParentKey)
        if (Individual* stored = container.find(e.key, e.individual->eval_index))
            stored->selection_count += 1;
    return {e.key, *e.individual};
}

std::vector<SelectedParent> draw_by_cumulative(Container& container, const std::vector<Elite>& pool,
                                               const std::vector<double>& weights,
                                               std::size_t batch_size, RngStream& rng) {
    std::vector<double> cumulative(weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        cumulative[i] = acc;
    }
    if (!(acc > 0.0)) throw std::runtime_error("selection: total weight is not positive");

    std::vector<SelectedParent> out;
    out.reserve(batch_size);
    for (std::size_t b = 0; b < batch_size; ++b) {
        const double target = rng.next_double() * acc;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
        const std::size_t pick =
            std::min(static_cast<std::size_t>(it - cumulative.begin()), weights.size() - 1);
        out.push_back(take(container, pool[pick]));
    }
    return out;
}

}  // namespace

std::vector<SelectedParent> select_uniform(Container& container, std::size_t batch_size,
                                           RngStream& rng,
                                           const std::vector<const Individual*>& extra_pool) {
    const auto pool = build_pool(container, extra_pool);
    if (pool.empty()) throw std::runtime_error("select_uniform: container is empty");

    std::vector<SelectedParent> out;
    out.reserve(batch_size);
    for (std::size_t b = 0; b < batch_size; ++b)
        out.push_back(take(container, pool[rng.uniform_index(pool.size())]));
    return out;
}

std::vector<SelectedParent> select_weighted(Container& container, ScoreKind kind,
                                            std::size_t batch_size, RngStream& rng,
                                            const std::vector<const Individual*>& extra_pool) {
    const auto pool = build_pool(container, extra_pool);
    if (pool.empty()) throw std::runtime_error("select_weighted: container is empty");

    std::vector<double> weights(pool.size());
    if (kind == ScoreKind::InverseCount) {
        for (std::size_t i = 0; i < pool.size(); ++i) {
            const Individual& ind = *pool[i].individual;
            weights[i] = 1.0 / (1.0 + static_cast<double>(ind.selection_count) +
                                static_cast<double>(ind.offspring_added));
        }
    } else {
        auto score = [kind](const Individual& ind) {
            switch (kind) {
                case ScoreKind::Curiosity: return ind.curiosity;
                case ScoreKind::Novelty: return ind.novelty;
                case ScoreKind::Fitness: return ind.fitness;
                default: return 0.0;
            }
        };
        double min_score = std::numeric_limits<double>::infinity();
        for (const auto& e : pool) min_score = std::min(min_score, score(*e.individual));
        const double offset = min_score < 0.0 ? -min_score : 0.0;
        for (std::size_t i = 0; i < pool.size(); ++i)
            weights[i] = std::max(score(*pool[i].individual) + offset, kWeightEpsilon);
    }
    return draw_by_cumulative(container, pool, weights, batch_size, rng);
}

std::vector<SelectedParent> select_deepgrid_rank(DeepGridContainer& container,
                                                 std::size_t batch_size, RngStream& rng) {
    if (container.filled_cells() == 0)
        throw std::runtime_error("select_deepgrid_rank: container is empty");

    std::vector<std::uint64_t> cell_ids;
    cell_ids.reserve(container.filled_cells());
    for (const auto& [linear, cell] : container.cells()) cell_ids.push_back(linear);

    std::vector<SelectedParent> out;
    out.reserve(batch_size);
    for (std::size_t b = 0; b < batch_size; ++b) {
        const std::uint64_t linear = cell_ids[rng.uniform_index(cell_ids.size())];
        const auto& cell = container.cells().at(linear);
        const std::size_t slot = deepgrid_select_within_cell(cell, rng);
        const std::uint64_t key = container.slot_key(linear, static_cast<int>(slot));
        if (Individual* stored = container.find(key, cell[slot].eval_index))
            stored->selection_count += 1;
        out.push_back({key, cell[slot]});
    }
    return out;
}

double novelty_score(const Descriptor& query, const std::vector<Descriptor>& reference, int k,
                     std::optional<std::size_t> exclude) {
    if (reference.empty()) throw std::invalid_argument("novelty_score: empty reference set");
    if (k < 1) throw std::invalid_argument("novelty_score: k must be >= 1");

    std::vector<double> distances;
    distances.reserve(reference.size());
    for (std::size_t i = 0; i < reference.size(); ++i) {
        if (exclude && *exclude == i) continue;
        double s = 0.0;
        for (std::size_t j = 0; j < query.size(); ++j) {
            const double t = query[j] - reference[i][j];
            s += t * t;
        }
        distances.push_back(std::sqrt(s));
    }
    if (distances.empty()) throw std::invalid_argument("novelty_score: no reference besides self");

    const std::size_t use = std::min(static_cast<std::size_t>(k), distances.size());
    std::nth_element(distances.begin(), distances.begin() + static_cast<std::ptrdiff_t>(use - 1),
                     distances.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < use; ++i) sum += distances[i];
    return sum / static_cast<double>(use);
}

void curiosity_update(Individual& parent, bool added, const CuriosityConfig& cfg) {
    if (added) {
        parent.curiosity += cfg.reward;
        parent.offspring_added += 1;
    } else {
        parent.curiosity = std::max(parent.curiosity - cfg.penalty, cfg.floor);
    }
}

void refresh_novelty(Container& container, int k) {
    const auto elite_view = container.elites();
    if (elite_view.empty()) return;

    std::vector<Descriptor> reference;
    reference.reserve(elite_view.size());
    std::unordered_map<std::int64_t, std::size_t> elite_position;
    for (std::size_t i = 0; i < elite_view.size(); ++i) {
        reference.push_back(elite_view[i].individual->descriptor);
        elite_position[elite_view[i].individual->eval_index] = i;
    }
    const double solitary = container.descriptor_bounds().diagonal();

    for (const Elite& e : container.all_stored()) {
        Individual* stored = container.find(e.key, e.individual->eval_index);
        if (!stored) continue;
        std::optional<std::size_t> exclude;
        if (auto it = elite_position.find(stored->eval_index); it != elite_position.end())
            exclude = it->second;
        const bool alone = reference.size() == 1 && exclude.has_value();
        stored->novelty = alone ? solitary : novelty_score(stored->descriptor, reference, k, exclude);
    }
}

}  // namespace qd
