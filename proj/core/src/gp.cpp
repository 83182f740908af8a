#include <qd/gp.hpp>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qd {

void GpConfig::validate(std::size_t input_dim) const {
    if (length_scales.empty() || (length_scales.size() != 1 && length_scales.size() != input_dim))
        throw std::invalid_argument("GpConfig: need one shared or one per-dimension length scale");
    for (double l : length_scales)
        if (!(l > 0.0)) throw std::invalid_argument("GpConfig: length scales must be > 0");
    if (signal_variance < 0.0 || noise_variance < 0.0)
        throw std::invalid_argument("GpConfig: variances must be >= 0");
}

struct GpModel::Impl {
    GpConfig config;
    std::vector<Genotype> inputs;
    Eigen::LLT<Eigen::MatrixXd> llt;
    Eigen::VectorXd alpha;  // K^-1 y

    double kernel(const Genotype& a, const Genotype& b) const {
        double s = 0.0;
        for (std::size_t d = 0; d < a.size(); ++d) {
            const double t = (a[d] - b[d]) / config.length_scale(d);
            s += t * t;
        }
        return config.signal_variance * std::exp(-0.5 * s);
    }
};

GpModel::GpModel() : impl_(std::make_unique<Impl>()) {}
GpModel::GpModel(GpModel&&) noexcept = default;
GpModel& GpModel::operator=(GpModel&&) noexcept = default;
GpModel::~GpModel() = default;

GpModel GpModel::fit(std::vector<Genotype> inputs, std::vector<double> targets,
                     const GpConfig& config) {
    if (inputs.empty() || inputs.size() != targets.size())
        throw std::invalid_argument("GpModel::fit: need |X| = |y| >= 1");
    const std::size_t dim = inputs.front().size();
    config.validate(dim);
    for (const auto& x : inputs)
        if (x.size() != dim) throw std::invalid_argument("GpModel::fit: inconsistent input dimension");

    const auto n = static_cast<Eigen::Index>(inputs.size());
    GpModel model;
    model.impl_->config = config;
    model.impl_->inputs = std::move(inputs);

    Eigen::MatrixXd gram(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = model.impl_->kernel(model.impl_->inputs[static_cast<std::size_t>(i)],
                                                 model.impl_->inputs[static_cast<std::size_t>(j)]);
            gram(i, j) = v;
            gram(j, i) = v;
        }

    Eigen::Map<const Eigen::VectorXd> y(targets.data(), n);
    const double diag_scale = std::max(config.signal_variance, 1e-12);
    double jitter = 0.0;
    for (int attempt = 0; attempt <= 8; ++attempt) {
        Eigen::MatrixXd k = gram;
        k.diagonal().array() += config.noise_variance + jitter;
        model.impl_->llt.compute(k);
        if (model.impl_->llt.info() == Eigen::Success) {
            model.impl_->alpha = model.impl_->llt.solve(y);
            return model;
        }
        jitter = jitter == 0.0 ? 1e-12 * diag_scale : jitter * 100.0;
    }
    throw GpFitError("GpModel::fit: kernel matrix is not positive definite even with maximum jitter");
}

std::pair<double, double> GpModel::predict(const Genotype& x) const {
    const auto& impl = *impl_;
    if (impl.inputs.empty()) throw std::logic_error("GpModel::predict: model not fitted");
    if (x.size() != impl.inputs.front().size())
        throw std::invalid_argument("GpModel::predict: query dimension mismatch");

    const auto n = static_cast<Eigen::Index>(impl.inputs.size());
    Eigen::VectorXd k_star(n);
    for (Eigen::Index i = 0; i < n; ++i)
        k_star(i) = impl.kernel(x, impl.inputs[static_cast<std::size_t>(i)]);

    const double mu = k_star.dot(impl.alpha);
    const Eigen::VectorXd v = impl.llt.matrixL().solve(k_star);
    double variance = impl.config.signal_variance - v.squaredNorm();
    variance = std::clamp(variance, 0.0, impl.config.signal_variance);
    return {mu, std::sqrt(variance)};
}

double GpModel::prior_std() const { return std::sqrt(impl_->config.signal_variance); }
std::size_t GpModel::training_size() const { return impl_->inputs.size(); }
const GpConfig& GpModel::config() const { return impl_->config; }

}  // namespace qd
