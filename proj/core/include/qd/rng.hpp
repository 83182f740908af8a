#pragma once

#include <cmath>
#include <cstdint>

namespace qd {

// Purpose tags keep the draw sequences of unrelated components independent:
// adding threads to evaluation, or changing the batch size of one stage,
// never shifts the draws consumed by another.
enum class StreamPurpose : std::uint64_t {
    Init = 1,
    Selection = 2,
    Variation = 3,
    EvalNoise = 4,
    ContainerAdd = 5,
    CvtSampling = 6,
    CvtSeeding = 7,
    SurrogatePick = 8,
    SurrogateInner = 9,
    Generic = 15,
};

constexpr std::uint64_t stream_id(StreamPurpose purpose, std::uint64_t index = 0) {
    return (static_cast<std::uint64_t>(purpose) << 56) | (index & 0x00FF'FFFF'FFFF'FFFFull);
}

/// Counter-based pseudo-random stream (splitmix64 output function).
///
/// A stream is fully identified by (seed, stream id); draw i is a pure
/// function of (seed, stream id, i), so identical call sequences reproduce
/// identical values regardless of what other streams were used in between.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream)
        : seed_(seed), stream_(stream), base_(mix(seed, stream)), counter_(0) {}

    RngStream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t index = 0)
        : RngStream(seed, stream_id(purpose, index)) {}

    std::uint64_t next_u64() { return finalize(base_ + 0x9E3779B97F4A7C15ull * ++counter_); }

    /// Uniform double in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1]; never zero, safe as a log() argument.
    double next_double_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    /// Uniform draw from [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Uniform index in [0, n). n must be > 0.
    std::uint64_t uniform_index(std::uint64_t n) {
        return static_cast<std::uint64_t>((static_cast<__uint128_t>(next_u64()) * n) >> 64);
    }

    /// Standard normal draw (Box-Muller, one value per pair of uniforms).
    double next_normal() {
        const double u1 = next_double_pos();
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Child stream; deterministic function of the parent identity, not of
    /// the parent's position in its own sequence.
    RngStream derive(std::uint64_t sub) const { return RngStream(seed_, mix(stream_, sub)); }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }
    std::uint64_t counter() const { return counter_; }

private:
    static std::uint64_t finalize(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        return finalize(finalize(a + 0x9E3779B97F4A7C15ull) ^ finalize(b * 0xD1B54A32D192ED03ull + 0x8CB92BA72F3D8DD7ull));
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t base_;
    std::uint64_t counter_;
};

}  // namespace qd
