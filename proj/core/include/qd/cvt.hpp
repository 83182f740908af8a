#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <qd/rng.hpp>
#include <qd/types.hpp>

namespace qd {

/// Exact nearest-point queries over a fixed point set, ties broken by lowest
/// id. Uses a uniform bucket grid for 1-3 dimensional spaces and falls back
/// to a linear scan otherwise; both paths return identical answers.
class NearestPointIndex {
public:
    NearestPointIndex() = default;
    NearestPointIndex(std::vector<Descriptor> points, const Bounds& bounds);

    int nearest(const Descriptor& query) const;
    const std::vector<Descriptor>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }

private:
    int nearest_brute(const double* q) const;
    int nearest_bucketed(const double* q) const;

    std::vector<Descriptor> points_;
    std::size_t dim_ = 0;
    // bucket grid (built only for dim <= 3 and enough points)
    bool bucketed_ = false;
    std::vector<int> res_;
    std::vector<double> lo_, inv_width_, cell_width_;
    double min_cell_width_ = 0.0;
    std::vector<std::vector<int>> buckets_;
};

/// Result of a CVT construction: the generator points plus how they were made.
struct CentroidSet {
    std::vector<Descriptor> centroids;
    Bounds bounds;
    std::uint64_t samples_used = 0;     // K
    int iterations = 0;                 // Lloyd iterations actually run
    double quantization_error = 0.0;    // final mean squared distance
    std::vector<double> error_history;  // mean squared distance per iteration
    bool low_sample_warning = false;    // K below the recommended 100*k

    std::size_t k() const { return centroids.size(); }
    std::size_t dim() const { return bounds.size(); }

    int nearest(const Descriptor& descriptor) const { return index_->nearest(descriptor); }

    void build_index();

private:
    std::shared_ptr<const NearestPointIndex> index_;
};

/// K independent uniform draws from the bounding box. K must be >= 1.
std::vector<Descriptor> sample_points(std::uint64_t count, const Bounds& bounds, RngStream& rng);

/// Lloyd's algorithm with weighted farthest-point (k-means++ style) seeding.
/// Stops when the largest centroid displacement, measured in normalized
/// coordinates, drops below tol, or after max_iters iterations. Empty
/// clusters are re-seeded to the point farthest from its assigned centroid.
CentroidSet kmeans_lloyd(const std::vector<Descriptor>& data, std::size_t k, const Bounds& bounds,
                         RngStream& rng, int max_iters = 100, double tol = 1e-6);

/// Centroidal Voronoi tessellation approximation: uniform sampling followed
/// by k-means. Requires sample_count >= 10*k; sample_count >= 100*k is
/// recommended (low_sample_warning is set below that).
CentroidSet cvt_build(std::size_t k, std::uint64_t sample_count, const Bounds& bounds, RngStream& rng,
                      int max_iters = 100, double tol = 1e-6);

/// cvt_build with internally derived streams, fully determined by the seed.
CentroidSet cvt_build_seeded(std::size_t k, std::uint64_t sample_count, const Bounds& bounds,
                             std::uint64_t seed, int max_iters = 100, double tol = 1e-6);

/// Disk-cached variant: centroids are stored as CSV keyed by
/// (k, sample_count, dim, seed) under cache_dir and reloaded bit-exactly.
CentroidSet cvt_build_cached(std::size_t k, std::uint64_t sample_count, const Bounds& bounds,
                             std::uint64_t seed, const std::string& cache_dir,
                             int max_iters = 100, double tol = 1e-6);

/// Argmin of Euclidean distance over an explicit centroid list, ties broken
/// by lowest id. Centroids must be non-empty.
int nearest_centroid(const Descriptor& descriptor, const std::vector<Descriptor>& centroids);

void write_centroids_csv(const CentroidSet& set, const std::string& path);
std::vector<Descriptor> read_centroids_csv(const std::string& path, std::size_t expected_dim);

}  // namespace qd
