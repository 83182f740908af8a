#include <qd/metrics.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qd {

std::optional<double> coverage(const Container& container) {
    const auto cells = container.cell_count();
    if (!cells) return std::nullopt;
    return static_cast<double>(container.filled_cells()) / static_cast<double>(*cells);
}

double qd_score(const Container& container) {
    double sum = 0.0;
    for (const Elite& e : container.elites()) sum += e.individual->fitness;
    return sum;
}

double qd_score_offset(const Container& container, double fitness_lower_bound) {
    double sum = 0.0;
    for (const Elite& e : container.elites()) sum += e.individual->fitness - fitness_lower_bound;
    return sum;
}

double knn_density(const Container& container, int k) {
    const auto elites = container.elites();
    if (elites.size() < 2) throw std::invalid_argument("knn_density: need at least 2 entries");
    if (k < 1) throw std::invalid_argument("knn_density: k must be >= 1");
    const std::size_t use = std::min(static_cast<std::size_t>(k), elites.size() - 1);

    double total = 0.0;
    std::vector<double> dist(elites.size() - 1);
    for (std::size_t i = 0; i < elites.size(); ++i) {
        std::size_t w = 0;
        for (std::size_t j = 0; j < elites.size(); ++j) {
            if (i == j) continue;
            double s = 0.0;
            const auto& a = elites[i].individual->descriptor;
            const auto& b = elites[j].individual->descriptor;
            for (std::size_t t = 0; t < a.size(); ++t) s += (a[t] - b[t]) * (a[t] - b[t]);
            dist[w++] = std::sqrt(s);
        }
        std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(use - 1), dist.end());
        double sum = 0.0;
        for (std::size_t t = 0; t < use; ++t) sum += dist[t];
        total += sum / static_cast<double>(use);
    }
    return total / static_cast<double>(elites.size());
}

MetricsRecord collect_metrics(const Container& container, std::int64_t iteration,
                              std::int64_t evaluations, double fitness_lower_bound, int knn_k) {
    MetricsRecord rec;
    rec.iteration = iteration;
    rec.evaluations = evaluations;
    rec.coverage = coverage(container);
    rec.entries = static_cast<std::int64_t>(container.size());

    double max_f = -std::numeric_limits<double>::infinity();
    double sum = 0.0, sum_off = 0.0;
    std::size_t n = 0;
    for (const Elite& e : container.elites()) {
        const double f = e.individual->fitness;
        max_f = std::max(max_f, f);
        sum += f;
        sum_off += f - fitness_lower_bound;
        ++n;
    }
    rec.qd_score = sum;
    rec.qd_score_offset = sum_off;
    rec.max_fitness = n ? max_f : 0.0;
    rec.mean_fitness = n ? sum / static_cast<double>(n) : 0.0;

    if (!rec.coverage && n >= 2) rec.knn_density = knn_density(container, knn_k);
    return rec;
}

}  // namespace qd
