#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include <qd/containers.hpp>
#include <qd/types.hpp>

namespace qd {

/// Endpoint of a planar kinematic chain with cumulative joint angles:
///   x = sum_j L_j cos(a_1 + ... + a_j),  y likewise with sin.
std::pair<double, double> arm_forward_kinematics(const std::vector<double>& angles,
                                                 const std::vector<double>& lengths);

/// Planar arm repertoire task. Genotype: m joint angles in [-pi, pi].
/// Descriptor: the endpoint, mapped affinely from [-1,1]^2 onto [0,1]^2.
/// Fitness: negative standard deviation of the joint angles, so smooth
/// postures score best (maximum 0 for equal angles).
ObjectiveSpec make_arm_objective(int joints = 8);

/// Multimodal illumination task. Genotype in [0,1]^n; descriptor is exactly
/// the first two components; fitness is the negated Rastrigin value of the
/// genotype rescaled to [-5.12, 5.12]^n (global maximum 0 at the box
/// center). Dimensions beyond the first two leave room for within-cell
/// optimization.
ObjectiveSpec make_illumination_objective(int n = 6);

/// Wrap an objective with independent Gaussian noise: sigma_f on the
/// fitness, sigma_b on each descriptor component (descriptors are clamped
/// back into bounds downstream). Noise draws come from the per-evaluation
/// stream, so parallel evaluation stays deterministic.
ObjectiveSpec noisy_wrapper(const ObjectiveSpec& base, double sigma_f, double sigma_b);

/// Objective lookup by CLI name ("arm" or "illum").
ObjectiveSpec make_objective_by_name(const std::string& name, int arm_joints, int illum_dim);

/// Regular genotype lattice: points_per_dim[i] evenly spaced values per
/// dimension (endpoints included; a single point sits at the lower bound).
struct LatticeSpec {
    std::vector<int> points_per_dim;

    std::uint64_t total_points(std::size_t expected_dim) const;
};

/// Evaluate every lattice point and stream it through the container's
/// add-rule; the result holds the per-cell optimum over the lattice by
/// construction. Refuses lattices above 10^7 points.
void exhaustive_oracle(const ObjectiveSpec& objective, const LatticeSpec& lattice,
                       Container& container, std::uint64_t seed = 0);

}  // namespace qd
