#pragma once
// Deterministic keyed random streams. Every stochastic unit of work (a
// trajectory, a sampling order, a probe batch) owns a stream keyed by
// (seed, stream index), so results never depend on worker scheduling.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace horizonlab {

class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(mix(seed ^ 0x9E3779B97F4A7C15ull) ^ mix(stream + 0xD1B54A32D192ED03ull))
    {
        next_u64();  // decorrelate nearby keys
    }

    std::uint64_t next_u64()
    {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix(state_);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + next_double() * (hi - lo); }

    /// Unbiased integer in [0, n), n >= 1. Rejects from the top of the range.
    std::uint64_t next_below(std::uint64_t n)
    {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold)
                return r % n;
        }
    }

    /// Standard normal via Box-Muller; the second value of each pair is cached.
    double next_normal()
    {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1;
        do {
            u1 = next_double();
        } while (u1 <= 0.0);
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    /// Derived substream; advances this stream by one draw.
    RandomStream fork(std::uint64_t index) { return RandomStream(next_u64(), index); }

  private:
    static std::uint64_t mix(std::uint64_t z)
    {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace horizonlab
