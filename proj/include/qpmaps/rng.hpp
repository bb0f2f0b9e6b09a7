#pragma once

// Deterministic, platform-independent pseudo-random generator (splitmix64
// core). The standard <random> distributions are implementation-defined,
// which would make seeded fixtures differ across toolchains; this one
// produces identical streams everywhere.

#include <cstdint>

namespace qpmaps {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [lo, hi], inclusive.
    long uniform_int(long lo, long hi) {
        return lo + static_cast<long>(next_u64() %
                                      static_cast<std::uint64_t>(hi - lo + 1));
    }

    bool coin() { return (next_u64() & 1) != 0; }

private:
    std::uint64_t state_;
};

// Stateless key derivation for counter-based point streams: a single
// splitmix64 scramble of (seed, counter).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (counter + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace qpmaps
