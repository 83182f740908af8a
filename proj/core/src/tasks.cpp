#include <qd/tasks.hpp>

#include <qd/evaluate.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qd {

std::pair<double, double> arm_forward_kinematics(const std::vector<double>& angles,
                                                 const std::vector<double>& lengths) {
    if (angles.size() != lengths.size())
        throw std::invalid_argument("arm_forward_kinematics: angles/lengths dimension mismatch");
    double x = 0.0, y = 0.0, cumulative = 0.0;
    for (std::size_t j = 0; j < angles.size(); ++j) {
        cumulative += angles[j];
        x += lengths[j] * std::cos(cumulative);
        y += lengths[j] * std::sin(cumulative);
    }
    return {x, y};
}

ObjectiveSpec make_arm_objective(int joints) {
    if (joints < 1) throw std::invalid_argument("make_arm_objective: need at least one joint");
    const auto m = static_cast<std::size_t>(joints);
    const std::vector<double> lengths(m, 1.0 / static_cast<double>(m));

    ObjectiveSpec spec;
    spec.name = "arm";
    spec.genotype_bounds = Bounds(m, Interval{-std::numbers::pi, std::numbers::pi});
    spec.descriptor_bounds = Bounds(2, Interval{0.0, 1.0});
    spec.fitness_lower_bound = -std::numbers::pi;
    spec.evaluator = [lengths](const Genotype& angles, RngStream&) {
        const auto [x, y] = arm_forward_kinematics(angles, lengths);
        double mean = 0.0;
        for (double a : angles) mean += a;
        mean /= static_cast<double>(angles.size());
        double var = 0.0;
        for (double a : angles) var += (a - mean) * (a - mean);
        var /= static_cast<double>(angles.size());
        const double fitness = -std::sqrt(var);
        return std::make_pair(fitness, Descriptor{(x + 1.0) / 2.0, (y + 1.0) / 2.0});
    };
    return spec;
}

ObjectiveSpec make_illumination_objective(int n) {
    if (n < 2) throw std::invalid_argument("make_illumination_objective: need n >= 2");
    const double scale = 10.24;  // [0,1] -> [-5.12, 5.12]

    ObjectiveSpec spec;
    spec.name = "illum";
    spec.genotype_bounds = Bounds(static_cast<std::size_t>(n), Interval{0.0, 1.0});
    spec.descriptor_bounds = Bounds(2, Interval{0.0, 1.0});
    // per-dimension bound: x^2 - 10 cos(2 pi x) + 10 <= 5.12^2 + 20
    spec.fitness_lower_bound = -static_cast<double>(n) * (5.12 * 5.12 + 20.0);
    spec.evaluator = [scale](const Genotype& theta, RngStream&) {
        double r = 0.0;
        for (double t : theta) {
            const double x = scale * t - scale / 2.0;
            r += x * x - 10.0 * std::cos(2.0 * std::numbers::pi * x) + 10.0;
        }
        return std::make_pair(-r, Descriptor{theta[0], theta[1]});
    };
    return spec;
}

ObjectiveSpec noisy_wrapper(const ObjectiveSpec& base, double sigma_f, double sigma_b) {
    if (sigma_f < 0.0 || sigma_b < 0.0)
        throw std::invalid_argument("noisy_wrapper: noise scales must be >= 0");
    base.validate();

    ObjectiveSpec spec = base;
    spec.noisy = spec.noisy || sigma_f > 0.0 || sigma_b > 0.0;
    auto inner = base.evaluator;
    spec.evaluator = [inner, sigma_f, sigma_b](const Genotype& g, RngStream& rng) {
        auto [fitness, descriptor] = inner(g, rng);
        if (sigma_f > 0.0) fitness += sigma_f * rng.next_normal();
        if (sigma_b > 0.0)
            for (double& b : descriptor) b += sigma_b * rng.next_normal();
        return std::make_pair(fitness, std::move(descriptor));
    };
    return spec;
}

ObjectiveSpec make_objective_by_name(const std::string& name, int arm_joints, int illum_dim) {
    if (name == "arm") return make_arm_objective(arm_joints);
    if (name == "illum") return make_illumination_objective(illum_dim);
    throw std::invalid_argument("unknown objective '" + name + "' (expected arm or illum)");
}

std::uint64_t LatticeSpec::total_points(std::size_t expected_dim) const {
    if (points_per_dim.size() != expected_dim)
        throw std::invalid_argument("LatticeSpec: dimension mismatch with the genotype space");
    std::uint64_t total = 1;
    for (int p : points_per_dim) {
        if (p < 1) throw std::invalid_argument("LatticeSpec: points per dimension must be >= 1");
        total *= static_cast<std::uint64_t>(p);
    }
    return total;
}

void exhaustive_oracle(const ObjectiveSpec& objective, const LatticeSpec& lattice,
                       Container& container, std::uint64_t seed) {
    objective.validate();
    const std::size_t n = objective.genotype_dim();
    const std::uint64_t total = lattice.total_points(n);
    if (total > 10'000'000ull)
        throw std::invalid_argument("exhaustive_oracle: lattice of " + std::to_string(total) +
                                    " points exceeds the 10^7 budget");

    EvalContext ctx;
    RngStream add_rng(seed, StreamPurpose::ContainerAdd);
    constexpr std::uint64_t kChunk = 8192;

    std::vector<Genotype> chunk;
    chunk.reserve(kChunk);
    auto flush = [&] {
        for (auto& ind : evaluate_batch(objective, chunk, ctx, seed))
            container.add(ind, add_rng);
        chunk.clear();
    };

    std::vector<int> idx(n, 0);
    Genotype point(n);
    for (std::uint64_t count = 0; count < total; ++count) {
        for (std::size_t j = 0; j < n; ++j) {
            const int p = lattice.points_per_dim[j];
            point[j] = p == 1 ? objective.genotype_bounds.lo(j)
                              : objective.genotype_bounds.lo(j) +
                                    objective.genotype_bounds.width(j) * idx[j] / (p - 1);
        }
        chunk.push_back(point);
        if (chunk.size() == kChunk) flush();
        // odometer increment, row-major
        for (std::size_t j = n; j-- > 0;) {
            if (++idx[j] < lattice.points_per_dim[j]) break;
            idx[j] = 0;
        }
    }
    if (!chunk.empty()) flush();
}

}  // namespace qd
