#include <qd/containers.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qd {

namespace {

double descriptor_distance(const Descriptor& a, const Descriptor& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double t = a[i] - b[i];
        s += t * t;
    }
    return std::sqrt(s);
}

// Shared grid/CVT replacement rule: empty cell accepts, occupied cell is
// replaced only on strict fitness improvement (ties keep the incumbent).
bool add_to_cell(std::map<std::uint64_t, Individual>& cells, std::uint64_t key,
                 const Individual& candidate) {
    auto it = cells.find(key);
    if (it == cells.end()) {
        cells.emplace(key, candidate);
        return true;
    }
    if (candidate.fitness > it->second.fitness) {
        it->second = candidate;
        return true;
    }
    return false;
}

Individual* find_in_cells(std::map<std::uint64_t, Individual>& cells, std::uint64_t key,
                          std::int64_t eval_index) {
    auto it = cells.find(key);
    if (it == cells.end() || it->second.eval_index != eval_index) return nullptr;
    return &it->second;
}

}  // namespace

GridContainer::GridContainer(GridSpec spec) : spec_(std::move(spec)) {
    total_cells_ = grid_cell_count(spec_);
}

bool GridContainer::add(const Individual& candidate, RngStream&) {
    return add_to_cell(cells_, grid_linear_cell(candidate.descriptor, spec_), candidate);
}

std::vector<Elite> GridContainer::elites() const {
    std::vector<Elite> out;
    out.reserve(cells_.size());
    for (const auto& [key, ind] : cells_) out.push_back({key, &ind});
    return out;
}

Individual* GridContainer::find(std::uint64_t key, std::int64_t eval_index) {
    return find_in_cells(cells_, key, eval_index);
}

const Individual* GridContainer::at_cell(std::uint64_t linear) const {
    auto it = cells_.find(linear);
    return it == cells_.end() ? nullptr : &it->second;
}

CvtContainer::CvtContainer(std::shared_ptr<const CentroidSet> centroids)
    : centroids_(std::move(centroids)) {
    if (!centroids_ || centroids_->k() == 0)
        throw std::invalid_argument("CvtContainer: empty centroid set");
}

bool CvtContainer::add(const Individual& candidate, RngStream&) {
    const auto key = static_cast<std::uint64_t>(centroids_->nearest(candidate.descriptor));
    return add_to_cell(cells_, key, candidate);
}

std::vector<Elite> CvtContainer::elites() const {
    std::vector<Elite> out;
    out.reserve(cells_.size());
    for (const auto& [key, ind] : cells_) out.push_back({key, &ind});
    return out;
}

Individual* CvtContainer::find(std::uint64_t key, std::int64_t eval_index) {
    return find_in_cells(cells_, key, eval_index);
}

DistanceArchive::DistanceArchive(double threshold, Bounds descriptor_bounds)
    : threshold_(threshold), bounds_(std::move(descriptor_bounds)) {
    if (!(threshold > 0.0)) throw std::invalid_argument("DistanceArchive: threshold must be > 0");
}

bool DistanceArchive::add(const Individual& candidate, RngStream&) {
    if (entries_.empty()) {
        entries_.push_back(candidate);
        return true;
    }
    // nearest and second-nearest entries by descriptor distance
    std::size_t nearest = 0;
    double d1 = std::numeric_limits<double>::infinity();
    double d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const double dist = descriptor_distance(candidate.descriptor, entries_[i].descriptor);
        if (dist < d1) {
            d2 = d1;
            d1 = dist;
            nearest = i;
        } else if (dist < d2) {
            d2 = dist;
        }
    }
    if (d1 >= threshold_) {
        entries_.push_back(candidate);
        return true;
    }
    // Replacement needs strict improvement over the nearest entry and a
    // second-nearest distance of at least l, limiting archive erosion.
    if (candidate.fitness > entries_[nearest].fitness && d2 >= threshold_) {
        entries_[nearest] = candidate;
        return true;
    }
    return false;
}

std::vector<Elite> DistanceArchive::elites() const {
    std::vector<Elite> out;
    out.reserve(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) out.push_back({i, &entries_[i]});
    return out;
}

Individual* DistanceArchive::find(std::uint64_t key, std::int64_t eval_index) {
    if (key >= entries_.size() || entries_[key].eval_index != eval_index) return nullptr;
    return &entries_[key];
}

DeepGridContainer::DeepGridContainer(GridSpec spec, int depth)
    : spec_(std::move(spec)), depth_(depth) {
    if (depth < 1) throw std::invalid_argument("DeepGridContainer: depth must be >= 1");
    total_cells_ = grid_cell_count(spec_);
    if (total_cells_ > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(depth))
        throw std::overflow_error("DeepGridContainer: cells * depth overflows the slot key space");
}

bool DeepGridContainer::add(const Individual& candidate, RngStream& rng) {
    auto& cell = cells_[grid_linear_cell(candidate.descriptor, spec_)];
    if (cell.size() < static_cast<std::size_t>(depth_)) {
        cell.push_back(candidate);
        ++stored_;
        return true;
    }
    cell[rng.uniform_index(cell.size())] = candidate;
    return true;
}

std::vector<Elite> DeepGridContainer::elites() const {
    std::vector<Elite> out;
    out.reserve(cells_.size());
    for (const auto& [linear, cell] : cells_) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < cell.size(); ++i)
            if (cell[i].fitness > cell[best].fitness) best = i;
        out.push_back({slot_key(linear, static_cast<int>(best)), &cell[best]});
    }
    return out;
}

std::vector<Elite> DeepGridContainer::all_stored() const {
    std::vector<Elite> out;
    out.reserve(stored_);
    for (const auto& [linear, cell] : cells_)
        for (std::size_t i = 0; i < cell.size(); ++i)
            out.push_back({slot_key(linear, static_cast<int>(i)), &cell[i]});
    return out;
}

Individual* DeepGridContainer::find(std::uint64_t key, std::int64_t eval_index) {
    const auto linear = key / static_cast<std::uint64_t>(depth_);
    const auto slot = static_cast<std::size_t>(key % static_cast<std::uint64_t>(depth_));
    auto it = cells_.find(linear);
    if (it == cells_.end() || slot >= it->second.size()) return nullptr;
    Individual& ind = it->second[slot];
    return ind.eval_index == eval_index ? &ind : nullptr;
}

std::size_t deepgrid_select_within_cell(const std::vector<Individual>& cell, RngStream& rng) {
    if (cell.empty()) throw std::invalid_argument("deepgrid_select_within_cell: empty cell");
    const std::size_t m = cell.size();
    if (m == 1) return 0;

    // ranks by ascending fitness, stable in slot order for equal fitness
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cell[a].fitness < cell[b].fitness; });

    const double total = static_cast<double>(m) * static_cast<double>(m + 1) / 2.0;
    const double target = rng.next_double() * total;
    double acc = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        acc += static_cast<double>(r + 1);
        if (acc >= target) return order[r];
    }
    return order[m - 1];
}

}  // namespace qd
