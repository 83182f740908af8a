#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <qd/containers.hpp>
#include <qd/rng.hpp>
#include <qd/types.hpp>

namespace qd {

/// Score used to weight parent selection.
enum class ScoreKind { Curiosity, Novelty, InverseCount, Fitness };

struct CuriosityConfig {
    double reward = 1.0;
    double penalty = 0.5;
    double floor = -10.0;  // minimum retained curiosity
};

/// A selected parent: a value snapshot plus the location key needed to land
/// score updates on the stored individual later (validated by eval_index).
struct SelectedParent {
    std::uint64_t key = 0;
    Individual snapshot;
};

/// Key marking a parent that is not addressable in the container (it came
/// from an auxiliary pool such as the previous batch); score updates for it
/// are dropped.
inline constexpr std::uint64_t kDetachedParentKey = ~0ull;

/// batch_size independent uniform draws (with replacement) from the elite
/// view, optionally widened by an auxiliary pool of individuals (e.g. the
/// previous offspring batch). Increments each chosen stored parent's
/// selection counter.
std::vector<SelectedParent> select_uniform(Container& container, std::size_t batch_size,
                                           RngStream& rng,
                                           const std::vector<const Individual*>& extra_pool = {});

/// Draws with probability proportional to a score-derived weight. Scores
/// that can be negative are shifted so the minimum maps to zero, and every
/// weight is floored at a small epsilon so no elite becomes unselectable;
/// the probability ORDER always matches the score order. InverseCount uses
/// the raw weight 1 / (1 + selection_count + offspring_added).
std::vector<SelectedParent> select_weighted(Container& container, ScoreKind kind,
                                            std::size_t batch_size, RngStream& rng,
                                            const std::vector<const Individual*>& extra_pool = {});

/// Deep-grid parent selection: a uniformly random occupied cell, then a
/// rank-weighted draw inside the cell (better members more likely).
std::vector<SelectedParent> select_deepgrid_rank(DeepGridContainer& container,
                                                 std::size_t batch_size, RngStream& rng);

/// Mean Euclidean distance to the min(k, available) nearest reference
/// descriptors. Pass exclude to remove the query's own entry (by position);
/// other references at identical positions still count.
double novelty_score(const Descriptor& query, const std::vector<Descriptor>& reference, int k,
                     std::optional<std::size_t> exclude = std::nullopt);

/// Reward the parent when its offspring entered the container, penalize it
/// (down to the floor) otherwise. Tracks offspring_added on success.
void curiosity_update(Individual& parent, bool added, const CuriosityConfig& cfg);

/// Recompute every stored individual's novelty against the current elite
/// set. A solitary individual gets the descriptor-box diagonal as a finite
/// "maximally novel" value.
void refresh_novelty(Container& container, int k);

}  // namespace qd
