#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace voltgrid {

// splitmix64; used to derive independent stream seeds from one run seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + stream * 0x9e3779b97f4a7c15ULL + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic RNG wrapper. std::mt19937_64 output is pinned by the
// standard; the uniform/normal transforms below are ours, so sampled
// sequences are reproducible across compilers and library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_bits() { return engine_(); }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0, n)
    std::uint64_t uniform_index(std::uint64_t n) {
        // modulo bias is negligible for n << 2^64
        return engine_() % n;
    }

    // standard normal via Box-Muller; caches the second deviate
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double two_pi = 6.283185307179586476925286766559;
        cached_ = r * std::sin(two_pi * u2);
        has_cached_ = true;
        return r * std::cos(two_pi * u2);
    }

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

// Stateless hash-based uniform in [-1, 1]; lets per-(step, node) noise be a
// pure function of its coordinates instead of a draw order.
inline double hash_noise(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t h = mix_seed(mix_seed(seed, a), b);
    return static_cast<double>(h >> 11) * 0x1.0p-52 - 1.0;
}

} // namespace voltgrid
