#include <qd/cvt.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qd {

namespace {

double dist2(const double* a, const double* b, std::size_t d) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double t = a[i] - b[i];
        s += t * t;
    }
    return s;
}

}  // namespace

NearestPointIndex::NearestPointIndex(std::vector<Descriptor> points, const Bounds& bounds)
    : points_(std::move(points)), dim_(bounds.size()) {
    if (points_.empty()) throw std::invalid_argument("NearestPointIndex: empty point set");
    for (const auto& p : points_)
        if (p.size() != dim_) throw std::invalid_argument("NearestPointIndex: point dimension mismatch");

    if (dim_ > 3 || points_.size() < 32) return;  // linear scan is fine there

    const auto k = points_.size();
    const int res = std::max(1, std::min(1024, static_cast<int>(std::floor(
                                 std::pow(static_cast<double>(k), 1.0 / static_cast<double>(dim_))))));
    res_.assign(dim_, res);
    lo_.resize(dim_);
    inv_width_.resize(dim_);
    cell_width_.resize(dim_);
    min_cell_width_ = std::numeric_limits<double>::infinity();
    std::size_t bucket_count = 1;
    for (std::size_t j = 0; j < dim_; ++j) {
        lo_[j] = bounds.lo(j);
        cell_width_[j] = bounds.width(j) / res;
        inv_width_[j] = 1.0 / cell_width_[j];
        min_cell_width_ = std::min(min_cell_width_, cell_width_[j]);
        bucket_count *= static_cast<std::size_t>(res);
    }
    buckets_.assign(bucket_count, {});
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t b = 0;
        for (std::size_t j = 0; j < dim_; ++j) {
            int c = static_cast<int>((points_[i][j] - lo_[j]) * inv_width_[j]);
            c = std::clamp(c, 0, res - 1);
            b = b * static_cast<std::size_t>(res) + static_cast<std::size_t>(c);
        }
        buckets_[b].push_back(static_cast<int>(i));
    }
    bucketed_ = true;
}

int NearestPointIndex::nearest(const Descriptor& query) const {
    if (query.size() != dim_) throw std::invalid_argument("NearestPointIndex: query dimension mismatch");
    return bucketed_ ? nearest_bucketed(query.data()) : nearest_brute(query.data());
}

int NearestPointIndex::nearest_brute(const double* q) const {
    const std::size_t d = points_.front().size();
    double best = std::numeric_limits<double>::infinity();
    int best_id = 0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const double v = dist2(q, points_[i].data(), d);
        if (v < best) {
            best = v;
            best_id = static_cast<int>(i);
        }
    }
    return best_id;
}

int NearestPointIndex::nearest_bucketed(const double* q) const {
    const int res = res_[0];
    std::vector<int> qc(dim_);
    for (std::size_t j = 0; j < dim_; ++j)
        qc[j] = std::clamp(static_cast<int>((q[j] - lo_[j]) * inv_width_[j]), 0, res - 1);

    double best = std::numeric_limits<double>::infinity();
    int best_id = -1;
    const int max_ring = res;  // after that every bucket has been seen

    auto scan_bucket = [&](std::size_t b) {
        for (int id : buckets_[b]) {
            const double v = dist2(q, points_[static_cast<std::size_t>(id)].data(), dim_);
            if (v < best || (v == best && id < best_id)) {
                best = v;
                best_id = id;
            }
        }
    };

    for (int ring = 0; ring <= max_ring; ++ring) {
        if (best_id >= 0 && ring >= 1) {
            // Any bucket at Chebyshev index distance `ring` is at least
            // (ring-1)*min_cell_width away; a strictly larger lower bound
            // cannot improve the best nor tie it with a lower id.
            const double lb = (ring - 1) * min_cell_width_;
            if (lb * lb > best) break;
        }
        if (dim_ == 1) {
            for (int dx : {-ring, ring}) {
                const int x = qc[0] + dx;
                if (x < 0 || x >= res) continue;
                scan_bucket(static_cast<std::size_t>(x));
                if (ring == 0) break;
            }
        } else if (dim_ == 2) {
            for (int dx = -ring; dx <= ring; ++dx) {
                const int x = qc[0] + dx;
                if (x < 0 || x >= res) continue;
                if (std::abs(dx) == ring) {
                    for (int dy = -ring; dy <= ring; ++dy) {
                        const int y = qc[1] + dy;
                        if (y < 0 || y >= res) continue;
                        scan_bucket(static_cast<std::size_t>(x) * res + y);
                    }
                } else {
                    for (int dy : {-ring, ring}) {
                        const int y = qc[1] + dy;
                        if (y < 0 || y >= res) continue;
                        scan_bucket(static_cast<std::size_t>(x) * res + y);
                    }
                }
            }
        } else {
            for (int dx = -ring; dx <= ring; ++dx) {
                const int x = qc[0] + dx;
                if (x < 0 || x >= res) continue;
                for (int dy = -ring; dy <= ring; ++dy) {
                    const int y = qc[1] + dy;
                    if (y < 0 || y >= res) continue;
                    const bool shell_xy = std::max(std::abs(dx), std::abs(dy)) == ring;
                    for (int dz = -ring; dz <= ring; ++dz) {
                        if (!shell_xy && std::abs(dz) != ring) continue;
                        const int z = qc[2] + dz;
                        if (z < 0 || z >= res) continue;
                        scan_bucket((static_cast<std::size_t>(x) * res + y) * res + z);
                    }
                }
            }
        }
    }
    return best_id;
}

void CentroidSet::build_index() {
    index_ = std::make_shared<const NearestPointIndex>(centroids, bounds);
}

std::vector<Descriptor> sample_points(std::uint64_t count, const Bounds& bounds, RngStream& rng) {
    if (count < 1) throw std::invalid_argument("sample_points: need at least one sample");
    bounds.validate();
    std::vector<Descriptor> out(count, Descriptor(bounds.size()));
    for (auto& p : out)
        for (std::size_t j = 0; j < bounds.size(); ++j) p[j] = rng.uniform(bounds.lo(j), bounds.hi(j));
    return out;
}

namespace {

// Weighted farthest-point seeding: each next seed is drawn with probability
// proportional to its squared distance from the closest seed chosen so far.
std::vector<Descriptor> seed_centroids(const std::vector<Descriptor>& data, std::size_t k,
                                       RngStream& rng) {
    const std::size_t n = data.size();
    const std::size_t d = data.front().size();
    std::vector<Descriptor> centroids;
    centroids.reserve(k);
    std::vector<char> chosen(n, 0);

    const std::size_t first = rng.uniform_index(n);
    centroids.push_back(data[first]);
    chosen[first] = 1;

    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = dist2(data[i].data(), centroids[0].data(), d);

    while (centroids.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) total += d2[i];
        std::size_t pick = n;
        if (total > 0.0) {
            const double target = rng.next_double() * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc >= target && d2[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
        }
        if (pick == n) {
            // all remaining mass is zero (duplicate-heavy data): take the
            // first unchosen point so seeding still yields k centroids
            for (std::size_t i = 0; i < n; ++i)
                if (!chosen[i]) {
                    pick = i;
                    break;
                }
            if (pick == n) pick = 0;
        }
        chosen[pick] = 1;
        centroids.push_back(data[pick]);
        const double* c = centroids.back().data();
        for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], dist2(data[i].data(), c, d));
    }
    return centroids;
}

}  // namespace

CentroidSet kmeans_lloyd(const std::vector<Descriptor>& data, std::size_t k, const Bounds& bounds,
                         RngStream& rng, int max_iters, double tol) {
    if (k < 1) throw std::invalid_argument("kmeans_lloyd: k must be >= 1");
    if (data.size() < k) throw std::invalid_argument("kmeans_lloyd: k exceeds the data size");
    const std::size_t n = data.size();
    const std::size_t d = bounds.size();
    for (const auto& p : data)
        if (p.size() != d) throw std::invalid_argument("kmeans_lloyd: data dimension mismatch");

    CentroidSet set;
    set.bounds = bounds;
    set.samples_used = n;
    set.centroids = seed_centroids(data, k, rng);

    std::vector<int> assignment(n, 0);
    std::vector<double> point_d2(n, 0.0);
    std::vector<double> sums(k * d);
    std::vector<std::int64_t> counts(k);

    int iterations = 0;
    for (int it = 0; it < max_iters; ++it) {
        NearestPointIndex index(set.centroids, bounds);
        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const int a = index.nearest(data[i]);
            assignment[i] = a;
            point_d2[i] = dist2(data[i].data(), set.centroids[static_cast<std::size_t>(a)].data(), d);
            sse += point_d2[i];
        }
        set.error_history.push_back(sse / static_cast<double>(n));
        ++iterations;

        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto a = static_cast<std::size_t>(assignment[i]);
            counts[a] += 1;
            for (std::size_t j = 0; j < d; ++j) sums[a * d + j] += data[i][j];
        }

        double max_move2 = 0.0;
        std::vector<std::size_t> empties;
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                empties.push_back(c);
                continue;
            }
            double move2 = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                const double nc = sums[c * d + j] / static_cast<double>(counts[c]);
                const double delta = (nc - set.centroids[c][j]) / bounds.width(j);
                move2 += delta * delta;
                set.centroids[c][j] = nc;
            }
            max_move2 = std::max(max_move2, move2);
        }
        for (std::size_t c : empties) {
            // relocate to the point currently farthest from its own centroid
            std::size_t far_i = 0;
            double far_d2 = -1.0;
            for (std::size_t i = 0; i < n; ++i)
                if (point_d2[i] > far_d2) {
                    far_d2 = point_d2[i];
                    far_i = i;
                }
            set.centroids[c] = data[far_i];
            point_d2[far_i] = 0.0;  // next empty cluster takes a different point
            max_move2 = std::numeric_limits<double>::infinity();
        }

        if (max_move2 < tol * tol) break;
    }

    // final quantization error against the converged centroids
    NearestPointIndex index(set.centroids, bounds);
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        sse += dist2(data[i].data(), set.centroids[static_cast<std::size_t>(index.nearest(data[i]))].data(), d);
    set.quantization_error = sse / static_cast<double>(n);
    set.error_history.push_back(set.quantization_error);
    set.iterations = iterations;
    set.build_index();
    return set;
}

CentroidSet cvt_build(std::size_t k, std::uint64_t sample_count, const Bounds& bounds, RngStream& rng,
                      int max_iters, double tol) {
    if (k < 1) throw std::invalid_argument("cvt_build: k must be >= 1");
    if (sample_count < 10 * static_cast<std::uint64_t>(k))
        throw std::invalid_argument("cvt_build: sample count must be at least 10*k");
    auto data = sample_points(sample_count, bounds, rng);
    CentroidSet set = kmeans_lloyd(data, k, bounds, rng, max_iters, tol);
    set.samples_used = sample_count;
    set.low_sample_warning = sample_count < 100 * static_cast<std::uint64_t>(k);
    return set;
}

CentroidSet cvt_build_seeded(std::size_t k, std::uint64_t sample_count, const Bounds& bounds,
                             std::uint64_t seed, int max_iters, double tol) {
    RngStream rng(seed, StreamPurpose::CvtSampling);
    return cvt_build(k, sample_count, bounds, rng, max_iters, tol);
}

CentroidSet cvt_build_cached(std::size_t k, std::uint64_t sample_count, const Bounds& bounds,
                             std::uint64_t seed, const std::string& cache_dir, int max_iters,
                             double tol) {
    namespace fs = std::filesystem;
    std::ostringstream name;
    name << "cvt_k" << k << "_K" << sample_count << "_d" << bounds.size() << "_seed" << seed << ".csv";
    const fs::path path = fs::path(cache_dir) / name.str();

    if (fs::exists(path)) {
        CentroidSet set;
        set.bounds = bounds;
        set.centroids = read_centroids_csv(path.string(), bounds.size());
        if (set.centroids.size() != k)
            throw std::runtime_error("cvt cache " + path.string() + ": expected " + std::to_string(k) +
                                     " centroids, found " + std::to_string(set.centroids.size()));
        set.samples_used = sample_count;
        set.build_index();
        return set;
    }

    CentroidSet set = cvt_build_seeded(k, sample_count, bounds, seed, max_iters, tol);
    fs::create_directories(fs::path(cache_dir));
    write_centroids_csv(set, path.string());
    return set;
}

int nearest_centroid(const Descriptor& descriptor, const std::vector<Descriptor>& centroids) {
    if (centroids.empty()) throw std::invalid_argument("nearest_centroid: empty centroid set");
    const std::size_t d = descriptor.size();
    double best = std::numeric_limits<double>::infinity();
    int best_id = 0;
    for (std::size_t i = 0; i < centroids.size(); ++i) {
        if (centroids[i].size() != d)
            throw std::invalid_argument("nearest_centroid: centroid dimension mismatch");
        const double v = dist2(descriptor.data(), centroids[i].data(), d);
        if (v < best) {
            best = v;
            best_id = static_cast<int>(i);
        }
    }
    return best_id;
}

void write_centroids_csv(const CentroidSet& set, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "centroid_id";
    for (std::size_t j = 0; j < set.dim(); ++j) out << ",c_" << j;
    out << "\n";
    char buf[64];
    for (std::size_t i = 0; i < set.centroids.size(); ++i) {
        out << i;
        for (std::size_t j = 0; j < set.dim(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", set.centroids[i][j]);
            out << ',' << buf;
        }
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

std::vector<Descriptor> read_centroids_csv(const std::string& path, std::size_t expected_dim) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty centroid file");
    std::vector<Descriptor> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::getline(row, field, ',');  // id column
        Descriptor c;
        while (std::getline(row, field, ',')) c.push_back(std::stod(field));
        if (c.size() != expected_dim)
            throw std::runtime_error(path + ": centroid row of dimension " + std::to_string(c.size()) +
                                     ", expected " + std::to_string(expected_dim));
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace qd
