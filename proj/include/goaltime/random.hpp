#pragma once

#include <cstdint>
#include <random>

namespace goaltime {

// All randomized routines draw from std::mt19937_64, whose output sequence
// is fixed by the C++ standard. The std:: distributions are not portable
// across standard libraries, so bounded integers and unit reals are derived
// from the raw 64-bit stream here.
using Engine = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seed for stream `index` of a computation seeded with `seed`. Replicate and
// simulation loops seed one engine per index so the result does not depend
// on how indices are split across workers.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Uniform on {0, ..., n - 1}; n > 0. Rejection keeps it unbiased.
inline std::uint64_t uniform_index(Engine& eng, std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t r = eng();
        if (r >= threshold) return r % n;
    }
}

} // namespace goaltime
