#pragma once

#include <cstdint>

namespace confham {

/// SplitMix64: tiny, platform-stable generator. Used everywhere randomness
/// must reproduce bit-for-bit from a seed (scans, sampling, Lanczos starts).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Derives an independent stream (e.g. one per scan cell).
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
        Rng r(seed ^ (a * 0x9e3779b97f4a7c15ULL) ^ (b * 0xc2b2ae3d27d4eb4fULL));
        return r.next_u64();
    }

private:
    std::uint64_t state_;
};

}  // namespace confham
