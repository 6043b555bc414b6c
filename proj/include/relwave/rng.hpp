#pragma once

#include <cstdint>

// splitmix64 (Vigna's mix of the Steele/Lea/Flood splittable generator).
// Small state, platform-independent output, and cheap seed derivation:
// exactly what a reproducible Monte Carlo trial scheme needs. Every trial
// gets its own stream via derive_seed(master, trial_index), so serial and
// parallel execution produce the same per-trial draws.

namespace relwave {

inline constexpr std::uint64_t kGolden64 = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += kGolden64;
        return splitmix64_mix(state_);
    }

    // uniform in [0, 1), 53 random bits
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
    std::uint64_t state_;
};

/// Deterministic per-trial seed from a master seed (splittable counter scheme).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64_mix(master + kGolden64 * (index + 1));
}

}  // namespace relwave
