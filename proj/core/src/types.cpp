#include <qd/types.hpp>

#include <cmath>

namespace qd {

double Bounds::diagonal() const {
    double s = 0.0;
    for (const auto& d : dims) s += (d.hi - d.lo) * (d.hi - d.lo);
    return std::sqrt(s);
}

bool Bounds::contains(const std::vector<double>& v) const {
    if (v.size() != dims.size()) return false;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] < dims[i].lo || v[i] > dims[i].hi) return false;
    return true;
}

std::size_t clamp_to_bounds(std::vector<double>& values, const Bounds& bounds) {
    if (values.size() != bounds.size())
        throw std::invalid_argument("clamp_to_bounds: dimension mismatch (" +
                                    std::to_string(values.size()) + " vs " +
                                    std::to_string(bounds.size()) + ")");
    std::size_t moved = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double lo = bounds.lo(i), hi = bounds.hi(i);
        if (values[i] < lo) {
            values[i] = lo;
            ++moved;
        } else if (values[i] > hi) {
            values[i] = hi;
            ++moved;
        }
    }
    return moved;
}

std::vector<double> clamped(std::vector<double> values, const Bounds& bounds) {
    clamp_to_bounds(values, bounds);
    return values;
}

}  // namespace qd
