#pragma once

#include <cmath>
#include <cstdint>

namespace lpskew::rng {

// Generator contract "lpskew-rng-v1": xoshiro256++ seeded through SplitMix64,
// with uniform doubles taken from the top 53 bits. Hand-rolled (not std::mt19937)
// so streams are bit-stable across standard libraries and platforms.
inline constexpr const char* kGeneratorVersion = "lpskew-rng-v1";

inline constexpr std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// One-shot avalanche of a 64-bit value (the SplitMix64 output function).
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Stream seed for replication b of a run over series length n: a fixed-order
// hash chain, so (base_seed, n, b) -> seed is stable across worker counts.
inline constexpr std::uint64_t derive_stream_seed(std::uint64_t base_seed,
                                                  std::uint64_t n,
                                                  std::uint64_t b) {
    std::uint64_t state = base_seed;
    std::uint64_t s1 = splitmix64_next(state);
    state ^= mix64(n + 0x9E3779B97F4A7C15ULL);
    std::uint64_t s2 = splitmix64_next(state);
    state ^= mix64(b + 0xD1B54A32D192ED03ULL);
    std::uint64_t s3 = splitmix64_next(state);
    return s1 ^ (s2 * 0xA24BAED4963EE407ULL) ^ (s3 * 0x9FB21C651E98DF25ULL);
}

class Xoshiro256pp {
public:
    explicit constexpr Xoshiro256pp(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64_next(sm);
    }

    constexpr std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0, 1), 53-bit resolution.
    constexpr double uniform01() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4] = {};
};

// Variate stream over one xoshiro instance. Normals come from the polar
// Box-Muller rejection method (pairs cached), exponentials from inversion.
class VariateStream {
public:
    explicit VariateStream(std::uint64_t seed) : gen_(seed) {}

    double uniform01() { return gen_.uniform01(); }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * gen_.uniform01() - 1.0;
            v = 2.0 * gen_.uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double mag = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * mag;
        have_spare_ = true;
        return u * mag;
    }

    // Exponential(rate), mean 1/rate.
    double exponential(double rate) {
        return -std::log1p(-gen_.uniform01()) / rate;
    }

private:
    Xoshiro256pp gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace lpskew::rng
