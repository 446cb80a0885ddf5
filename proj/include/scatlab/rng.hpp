#pragma once

// Per-task random streams.  Each stream is seeded from (master seed, index),
// so results do not depend on which worker runs which task.

#include <cstdint>
#include <numbers>
#include <random>

namespace scatlab {

inline std::mt19937_64 task_rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

/// Uniform on [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

inline double uniform_angle(std::mt19937_64& rng) { return 2.0 * std::numbers::pi * uniform01(rng); }

}  // namespace scatlab
