#include <qd/grid.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qd {

void GridSpec::validate() const {
    if (bins.empty() || bins.size() != bounds.size())
        throw std::invalid_argument("GridSpec: bins and bounds must have the same nonzero dimension");
    for (int n : bins)
        if (n < 1) throw std::invalid_argument("GridSpec: every bin count must be >= 1");
    bounds.validate();
}

std::uint64_t grid_cell_count(const GridSpec& spec) {
    spec.validate();
    std::uint64_t count = 1;
    for (int n : spec.bins) {
        const auto f = static_cast<std::uint64_t>(n);
        if (count > std::numeric_limits<std::uint64_t>::max() / f)
            throw std::overflow_error("grid_cell_count: cell count overflows 64 bits");
        count *= f;
    }
    return count;
}

std::vector<int> grid_cell_index(const Descriptor& descriptor, const GridSpec& spec) {
    if (descriptor.size() != spec.dim())
        throw std::invalid_argument("grid_cell_index: descriptor dimension mismatch");
    std::vector<int> cell(spec.dim());
    for (std::size_t j = 0; j < spec.dim(); ++j) {
        const double lo = spec.bounds.lo(j), hi = spec.bounds.hi(j);
        const double b = descriptor[j];
        if (b < lo || b > hi)
            throw std::out_of_range("grid_cell_index: descriptor component " + std::to_string(j) +
                                    " outside bounds");
        const int n = spec.bins[j];
        int i = static_cast<int>(std::floor(static_cast<double>(n) * (b - lo) / (hi - lo)));
        if (i >= n) i = n - 1;  // upper edge closes into the last bin
        if (i < 0) i = 0;
        cell[j] = i;
    }
    return cell;
}

std::uint64_t grid_linear_index(const std::vector<int>& cell, const GridSpec& spec) {
    if (cell.size() != spec.dim())
        throw std::invalid_argument("grid_linear_index: cell dimension mismatch");
    std::uint64_t linear = 0;
    for (std::size_t j = 0; j < cell.size(); ++j) {
        if (cell[j] < 0 || cell[j] >= spec.bins[j])
            throw std::out_of_range("grid_linear_index: cell coordinate out of range");
        linear = linear * static_cast<std::uint64_t>(spec.bins[j]) + static_cast<std::uint64_t>(cell[j]);
    }
    return linear;
}

std::vector<int> grid_delinearize(std::uint64_t linear, const GridSpec& spec) {
    std::vector<int> cell(spec.dim());
    for (std::size_t j = spec.dim(); j-- > 0;) {
        const auto n = static_cast<std::uint64_t>(spec.bins[j]);
        cell[j] = static_cast<int>(linear % n);
        linear /= n;
    }
    return cell;
}

std::uint64_t grid_linear_cell(const Descriptor& descriptor, const GridSpec& spec) {
    return grid_linear_index(grid_cell_index(descriptor, spec), spec);
}

Bounds grid_cell_box(const std::vector<int>& cell, const GridSpec& spec) {
    std::vector<Interval> dims(spec.dim());
    for (std::size_t j = 0; j < spec.dim(); ++j) {
        const double lo = spec.bounds.lo(j);
        const double w = spec.bounds.width(j) / static_cast<double>(spec.bins[j]);
        dims[j] = Interval{lo + w * cell[j], lo + w * (cell[j] + 1)};
    }
    return Bounds(std::move(dims));
}

}  // namespace qd
