#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include <qd/cvt.hpp>
#include <qd/grid.hpp>
#include <qd/rng.hpp>
#include <qd/types.hpp>

namespace qd {

/// A stored individual together with its stable location key. Keys address
/// cells (grid, CVT), entry slots (distance archive) or (cell, depth slot)
/// pairs (deep grid); an occupant change at a key is detected through the
/// individual's eval_index.
struct Elite {
    std::uint64_t key = 0;
    const Individual* individual = nullptr;
};

/// An elite collection with an add-rule. Writers must be serialized; between
/// write batches any number of readers may run concurrently.
class Container {
public:
    virtual ~Container() = default;

    /// Apply the container's add-rule. Returns true iff the container
    /// changed. The stream is consumed only by containers with randomized
    /// replacement (deep grid).
    virtual bool add(const Individual& candidate, RngStream& rng) = 0;

    /// The elite view: per cell/entry the single representative, in a
    /// deterministic order. Pointers stay valid until the next add().
    virtual std::vector<Elite> elites() const = 0;

    /// Every stored individual (differs from elites() only for deep grids).
    virtual std::vector<Elite> all_stored() const { return elites(); }

    /// Mutable access for score updates: the individual stored at `key`,
    /// or nullptr if the occupant is no longer the one with `eval_index`.
    virtual Individual* find(std::uint64_t key, std::int64_t eval_index) = 0;

    /// Number of stored individuals.
    virtual std::size_t size() const = 0;

    /// Total cell capacity; nullopt for containers without a fixed cell set.
    virtual std::optional<std::uint64_t> cell_count() const = 0;

    /// Number of distinct occupied cells (equals size() except for deep grids).
    virtual std::size_t filled_cells() const { return size(); }

    virtual const Bounds& descriptor_bounds() const = 0;
};

class GridContainer final : public Container {
public:
    explicit GridContainer(GridSpec spec);

    bool add(const Individual& candidate, RngStream& rng) override;
    std::vector<Elite> elites() const override;
    Individual* find(std::uint64_t key, std::int64_t eval_index) override;
    std::size_t size() const override { return cells_.size(); }
    std::optional<std::uint64_t> cell_count() const override { return total_cells_; }
    const Bounds& descriptor_bounds() const override { return spec_.bounds; }

    const GridSpec& spec() const { return spec_; }
    const Individual* at_cell(std::uint64_t linear) const;
    const std::map<std::uint64_t, Individual>& cells() const { return cells_; }

private:
    GridSpec spec_;
    std::uint64_t total_cells_;
    std::map<std::uint64_t, Individual> cells_;
};

class CvtContainer final : public Container {
public:
    explicit CvtContainer(std::shared_ptr<const CentroidSet> centroids);

    bool add(const Individual& candidate, RngStream& rng) override;
    std::vector<Elite> elites() const override;
    Individual* find(std::uint64_t key, std::int64_t eval_index) override;
    std::size_t size() const override { return cells_.size(); }
    std::optional<std::uint64_t> cell_count() const override { return centroids_->k(); }
    const Bounds& descriptor_bounds() const override { return centroids_->bounds; }

    const CentroidSet& centroids() const { return *centroids_; }
    const std::map<std::uint64_t, Individual>& cells() const { return cells_; }

private:
    std::shared_ptr<const CentroidSet> centroids_;
    std::map<std::uint64_t, Individual> cells_;
};

/// Unstructured archive controlled by a minimum descriptor distance l.
/// A candidate is inserted outright when it is at least l away from every
/// entry; otherwise it may replace its nearest entry when it strictly
/// improves on it and keeps at least l to the second-nearest entry.
class DistanceArchive final : public Container {
public:
    DistanceArchive(double threshold, Bounds descriptor_bounds);

    bool add(const Individual& candidate, RngStream& rng) override;
    std::vector<Elite> elites() const override;
    Individual* find(std::uint64_t key, std::int64_t eval_index) override;
    std::size_t size() const override { return entries_.size(); }
    std::optional<std::uint64_t> cell_count() const override { return std::nullopt; }
    const Bounds& descriptor_bounds() const override { return bounds_; }

    double threshold() const { return threshold_; }
    const std::vector<Individual>& entries() const { return entries_; }

private:
    double threshold_;
    Bounds bounds_;
    std::vector<Individual> entries_;
};

/// Grid holding up to `depth` individuals per cell. New solutions always
/// enter their cell: into a free slot if one exists, otherwise by replacing
/// a uniformly random occupant regardless of fitness.
class DeepGridContainer final : public Container {
public:
    DeepGridContainer(GridSpec spec, int depth);

    bool add(const Individual& candidate, RngStream& rng) override;
    std::vector<Elite> elites() const override;
    std::vector<Elite> all_stored() const override;
    Individual* find(std::uint64_t key, std::int64_t eval_index) override;
    std::size_t size() const override { return stored_; }
    std::optional<std::uint64_t> cell_count() const override { return total_cells_; }
    std::size_t filled_cells() const override { return cells_.size(); }
    const Bounds& descriptor_bounds() const override { return spec_.bounds; }

    const GridSpec& spec() const { return spec_; }
    int depth() const { return depth_; }
    const std::map<std::uint64_t, std::vector<Individual>>& cells() const { return cells_; }

    std::uint64_t slot_key(std::uint64_t cell_linear, int slot) const {
        return cell_linear * static_cast<std::uint64_t>(depth_) + static_cast<std::uint64_t>(slot);
    }

private:
    GridSpec spec_;
    int depth_;
    std::uint64_t total_cells_;
    std::size_t stored_ = 0;
    std::map<std::uint64_t, std::vector<Individual>> cells_;
};

/// Draw one member of a non-empty deep-grid cell with probability
/// proportional to its fitness rank (rank 1 = worst member).
std::size_t deepgrid_select_within_cell(const std::vector<Individual>& cell, RngStream& rng);

}  // namespace qd
