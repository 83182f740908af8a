#pragma once

#include <memory>
#include <utility>
#include <vector>

#include <qd/types.hpp>

namespace qd {

/// Squared-exponential kernel hyperparameters. length_scales may hold one
/// value (shared across dimensions) or one value per input dimension.
struct GpConfig {
    std::vector<double> length_scales{0.25};
    double signal_variance = 1.0;  // s^2
    double noise_variance = 0.0;   // sigma_n^2

    double length_scale(std::size_t dim) const {
        return length_scales.size() == 1 ? length_scales[0] : length_scales[dim];
    }
    void validate(std::size_t input_dim) const;
};

struct GpFitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exact Gaussian-process regression with a zero prior mean and a cached
/// Cholesky factorization of the kernel matrix. Refits are full; there are
/// no low-rank updates. Prediction is read-only and thread-safe.
class GpModel {
public:
    /// Fit on |X| = |y| >= 1 points. A small diagonal jitter is escalated
    /// until the kernel matrix factorizes; GpFitError if it never does.
    static GpModel fit(std::vector<Genotype> inputs, std::vector<double> targets,
                       const GpConfig& config);

    /// Posterior mean and standard deviation at x. The variance is clamped
    /// to [0, s^2]; it cannot exceed the prior.
    std::pair<double, double> predict(const Genotype& x) const;

    double prior_std() const;
    std::size_t training_size() const;
    const GpConfig& config() const;

    GpModel(GpModel&&) noexcept;
    GpModel& operator=(GpModel&&) noexcept;
    ~GpModel();

private:
    GpModel();
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace qd
