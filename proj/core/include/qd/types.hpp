#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <qd/rng.hpp>

namespace qd {

using Genotype = std::vector<double>;
using Descriptor = std::vector<double>;

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

/// Axis-aligned box bounds, one interval per dimension (lo < hi).
struct Bounds {
    std::vector<Interval> dims;

    Bounds() = default;
    explicit Bounds(std::vector<Interval> d) : dims(std::move(d)) { validate(); }
    Bounds(std::size_t n, Interval iv) : dims(n, iv) { validate(); }

    std::size_t size() const { return dims.size(); }
    double lo(std::size_t i) const { return dims[i].lo; }
    double hi(std::size_t i) const { return dims[i].hi; }
    double width(std::size_t i) const { return dims[i].hi - dims[i].lo; }

    double mean_width() const {
        double s = 0.0;
        for (const auto& d : dims) s += d.hi - d.lo;
        return dims.empty() ? 0.0 : s / static_cast<double>(dims.size());
    }

    /// Euclidean length of the box diagonal.
    double diagonal() const;

    bool contains(const std::vector<double>& v) const;

    void validate() const {
        for (const auto& d : dims)
            if (!(d.lo < d.hi)) throw std::invalid_argument("Bounds: need lo < hi in every dimension");
    }
};

/// Project each component of `values` onto [lo_i, hi_i]. Idempotent.
/// Returns the number of components that were moved.
std::size_t clamp_to_bounds(std::vector<double>& values, const Bounds& bounds);

/// Copying variant of clamp_to_bounds.
std::vector<double> clamped(std::vector<double> values, const Bounds& bounds);

struct Individual {
    Genotype genotype;
    double fitness = 0.0;
    Descriptor descriptor;
    double curiosity = 0.0;
    double novelty = 0.0;
    std::int64_t selection_count = 0;
    std::int64_t offspring_added = 0;
    /// Global evaluation counter value at which this individual was produced.
    std::int64_t eval_index = -1;
};

/// Raw objective output before bookkeeping.
struct Evaluation {
    double fitness = 0.0;
    Descriptor descriptor;
    std::int64_t eval_index = -1;
};

/// The black-box problem definition: search box, feature box, and the
/// evaluator mapping a genotype to (fitness, descriptor). Fitness is always
/// maximized; wrap minimization problems by negation when constructing this.
struct ObjectiveSpec {
    std::string name;
    Bounds genotype_bounds;
    Bounds descriptor_bounds;
    /// Evaluator. The stream argument is consumed only by noisy objectives;
    /// deterministic objectives must ignore it.
    std::function<std::pair<double, Descriptor>(const Genotype&, RngStream&)> evaluator;
    bool noisy = false;
    /// Declared lower bound on achievable fitness, used by the offset
    /// (non-negative) variant of the QD-score.
    double fitness_lower_bound = 0.0;

    std::size_t genotype_dim() const { return genotype_bounds.size(); }
    std::size_t descriptor_dim() const { return descriptor_bounds.size(); }

    void validate() const {
        if (genotype_bounds.size() < 1 || descriptor_bounds.size() < 1)
            throw std::invalid_argument("ObjectiveSpec: need n >= 1 and d >= 1");
        genotype_bounds.validate();
        descriptor_bounds.validate();
        if (!evaluator) throw std::invalid_argument("ObjectiveSpec: missing evaluator");
    }
};

struct EvaluationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qd
