#ifndef SARFORGE_RNG_HPP
#define SARFORGE_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>

#include "sarforge/types.hpp"

namespace sarforge {

/// SplitMix64 finalizer. Full-avalanche 64-bit mixing.
constexpr uint64_t mix64(uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based stream key: pure function of (master_seed, stream_index).
constexpr uint64_t derive_stream_key(uint64_t master_seed, uint64_t stream_index) {
    return mix64(mix64(master_seed) ^ mix64(stream_index + 0xA5A5A5A5A5A5A5A5ULL));
}

/// xoshiro256** generator with deterministic distribution functions.
///
/// All sampling (uniform, normal, gamma) is implemented here rather than via
/// <random> distributions so draw sequences are identical across standard
/// library implementations. Single-owner: one stream per unit of work.
class RandomStream {
public:
    RandomStream() : RandomStream(SeedSpec{}) {}

    explicit RandomStream(const SeedSpec& seed) {
        // Expand the stream key into 256 bits of state with SplitMix64.
        uint64_t k = derive_stream_key(seed.master_seed, seed.stream_index);
        for (auto& word : state_) {
            k = mix64(k);
            word = k;
        }
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

    /// Uniform integer in [lo, hi], endpoints inclusive. Unbiased.
    int64_t uniform_int(int64_t lo, int64_t hi) {
        const uint64_t range = static_cast<uint64_t>(hi - lo) + 1;
        if (range == 0) return static_cast<int64_t>(next_u64());  // full 64-bit span
        const uint64_t limit = (0 - range) % range;  // reject below this to kill modulo bias
        uint64_t x = next_u64();
        while (x < limit) x = next_u64();
        return lo + static_cast<int64_t>(x % range);
    }

    /// Standard normal via Box-Muller; the second value of each pair is cached.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    /// Gamma(shape, scale 1) via Marsaglia-Tsang squeeze; shape < 1 boosted.
    double gamma(double shape) {
        if (shape <= 0.0) throw ConfigError("gamma shape must be > 0");
        if (shape < 1.0) {
            const double u = uniform();
            return gamma(shape + 1.0) * std::pow(u > 0.0 ? u : 0x1.0p-53, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x;
            double v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

private:
    static constexpr uint64_t rotl(uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<uint64_t, 4> state_{};
    double cached_ = 0.0;
    bool have_cached_ = false;
};

inline RandomStream derive_stream(const SeedSpec& seed) { return RandomStream(seed); }

}  // namespace sarforge

#endif  // SARFORGE_RNG_HPP
