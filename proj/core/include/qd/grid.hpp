#pragma once

#include <cstdint>
#include <vector>

#include <qd/types.hpp>

namespace qd {

/// Regular N-dimensional discretization of the descriptor box.
struct GridSpec {
    std::vector<int> bins;  // per-dimension bin counts, all >= 1
    Bounds bounds;          // descriptor bounds

    std::size_t dim() const { return bins.size(); }

    void validate() const;
};

/// Total number of cells (product of the per-dimension bin counts).
/// Throws std::overflow_error if the product does not fit in 64 bits.
std::uint64_t grid_cell_count(const GridSpec& spec);

/// Per-dimension bin index of a descriptor:
///   i_j = floor(n_j * (b_j - lo_j) / (hi_j - lo_j)),
/// with the upper edge b_j == hi_j falling into the last bin. The descriptor
/// must already be within bounds.
std::vector<int> grid_cell_index(const Descriptor& descriptor, const GridSpec& spec);

/// Row-major linearization of a cell tuple (the storage form).
std::uint64_t grid_linear_index(const std::vector<int>& cell, const GridSpec& spec);

/// Inverse of grid_linear_index.
std::vector<int> grid_delinearize(std::uint64_t linear, const GridSpec& spec);

/// Convenience: linear cell index of a descriptor.
std::uint64_t grid_linear_cell(const Descriptor& descriptor, const GridSpec& spec);

/// Axis-aligned box of one cell.
Bounds grid_cell_box(const std::vector<int>& cell, const GridSpec& spec);

}  // namespace qd
