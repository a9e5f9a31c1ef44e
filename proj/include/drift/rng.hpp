#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace drift {

/// SplitMix64 finalizer (Steele, Lea & Flood 2014). Also used as the keyed
/// mixing step when deriving independent substreams, so that draws never
/// depend on thread scheduling.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic random stream. Algorithm: SplitMix64; one stream per
/// (seed, stream, index) key via mix64 chaining. A fixed seed reproduces the
/// same draws regardless of platform or thread count.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    static Rng substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) {
        return Rng(mix64(seed ^ mix64(stream ^ mix64(index))));
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1), never exactly 0 or 1.
    double next_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Unbiased uniform integer on {0, ..., bound-1}.
    std::uint64_t next_below(std::uint64_t bound) {
        std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    /// Standard normal via Box-Muller; the paired draw is cached.
    double next_gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_open();
        double u2 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Student-t with 2 degrees of freedom via the closed-form quantile
    /// Q(p) = (2p-1)/sqrt(2p(1-p)).
    double next_t2() {
        double p = next_open();
        return (2.0 * p - 1.0) / std::sqrt(2.0 * p * (1.0 - p));
    }

    /// Poisson by inversion of the product of uniforms (Knuth); intended for
    /// small means as they occur with unit-scale intensities.
    long next_poisson(double mean) {
        double limit = std::exp(-mean);
        long k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= next_double();
        } while (p > limit);
        return k - 1;
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace drift
