#pragma once

#include <cmath>
#include <cstdint>

namespace levyrate {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256** seeded through splitmix64. One instance per (seed, stream)
// pair; simulation code uses one stream per cycle block so that results do
// not depend on thread count or scheduling. std:: distributions are avoided
// on purpose: their sequences are implementation-defined and the CLI
// promises byte-identical output for a fixed seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t s = seed + 0x632be59bd9b4e019ULL * (stream + 1);
        for (auto& w : state_) w = splitmix64(s);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

    // Number of failures before the first success, P(N=n) = (1-p) p^n, n >= 0.
    std::uint64_t geometric_failures(double p) {
        if (p <= 0.0) return 0;
        const double u = 1.0 - uniform01();  // in (0,1]
        const double n = std::floor(std::log(u) / std::log(p));
        return n < 0 ? 0 : static_cast<std::uint64_t>(n);
    }

    // Categorical draw from cumulative weights (last entry = total).
    std::size_t categorical_from_cumulative(const double* cum, std::size_t n) {
        const double u = uniform01() * cum[n - 1];
        std::size_t lo = 0;
        while (lo + 1 < n && cum[lo] <= u) ++lo;
        return lo;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

}  // namespace levyrate
