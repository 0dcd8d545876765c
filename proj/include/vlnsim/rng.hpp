#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace vlnsim {

// 64-bit FNV-1a. Used to fold string keys into seed material.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Stable per-episode seed: hash of (master seed, "scene/episode" uid, grid index).
// Independent of execution order, so parallel sweeps reproduce serial ones.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view uid,
                                 std::uint64_t grid_index) {
    return splitmix64(splitmix64(master_seed ^ fnv1a64(uid)) ^ grid_index);
}

// Thin wrapper over mt19937_64 with fixed draw semantics. std::*_distribution is
// implementation-defined, so all sampling goes through these helpers to keep
// outputs identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). Modulo bias is negligible for the small n used here.
    std::uint64_t uniform_int(std::uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

    // +1 or -1 with equal probability.
    int sign() { return (next_u64() & 1u) ? 1 : -1; }

private:
    std::mt19937_64 engine_;
};

}  // namespace vlnsim
