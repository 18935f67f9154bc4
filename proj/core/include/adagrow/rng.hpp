#pragma once

// Seeded, splittable random generator for the simulation harness.
// Every Monte Carlo trial draws from its own stream derived from
// (seed, stream index), so trials are reproducible independently of
// evaluation order or thread count, and two runs with the same seed
// produce identical draws.

#include <cstdint>
#include <cmath>

namespace adagrow {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Scrambled per-trial seed so trial i's streams never overlap trial j's.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t sm = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    return splitmix64_next(sm);
}

// xoshiro256++ with splitmix64 seeding.
class Rng {
  public:
    static constexpr const char* name = "xoshiro256++";

    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64_next(sm);
        have_spare_ = false;
    }

    // Independent stream for a given (seed, stream) pair.
    static Rng stream(std::uint64_t seed, std::uint64_t stream_index) {
        std::uint64_t sm = seed ^ (0x9e3779b97f4a7c15ULL * (stream_index + 1));
        return Rng(splitmix64_next(sm) ^ stream_index);
    }

    std::uint64_t next() {
        auto rotl = [](std::uint64_t x, int k) {
            return (x << k) | (x >> (64 - k));
        };
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

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() { return (next() >> 11) * 0x1.0p-53; }

    // Standard normal via the polar method; one spare value is cached so the
    // draw sequence is a pure function of the stream state.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, r2;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            r2 = u * u + v * v;
        } while (r2 >= 1.0 || r2 == 0.0);
        double m = std::sqrt(-2.0 * std::log(r2) / r2);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

    // Index in [0, n) by rejection-free scaling (n << 2^53 in all uses here).
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(uniform01() * static_cast<double>(n));
    }

  private:
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool have_spare_;
};

}  // namespace adagrow
