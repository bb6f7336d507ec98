#pragma once

#include <cmath>
#include <cstdint>

// xoshiro256++ seeded through SplitMix64. Every Monte Carlo drop gets its
// own stream derived from (seed, drop_index), so drops can run on any
// thread in any order and still reproduce bit-identically.

namespace hetnet {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : state_) w = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Exp(1) power fading draw.
    double exponential() { return -std::log1p(-uniform()); }

    /// Poisson(mean) count; inversion for small means, PTRS rejection above.
    std::uint64_t poisson(double mean);

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t state_[4];
};

/// Independent stream for one drop. Mixing the drop index through
/// SplitMix64 before seeding keeps nearby indices uncorrelated.
inline Xoshiro256pp drop_stream(std::uint64_t seed, std::uint64_t drop_index) {
    std::uint64_t sm = seed ^ (0x9e3779b97f4a7c15ULL * (drop_index + 1));
    return Xoshiro256pp(splitmix64(sm));
}

}  // namespace hetnet
