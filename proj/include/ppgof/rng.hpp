#pragma once

#include <cmath>
#include <cstdint>

namespace ppgof {

// Identifies one reproducible random stream. The same (seed, stream) pair
// yields the same draws on every run and under any thread scheduling, so
// simulation batches are parallelized by mapping over stream indices.
struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    // Derived substream; nesting sub(j).sub(i) gives independent inner streams.
    [[nodiscard]] RngSeed sub(std::uint64_t k) const;
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
} // namespace detail

inline RngSeed RngSeed::sub(std::uint64_t k) const {
    std::uint64_t x = stream ^ (k + 0x632be59bd9b4e019ULL);
    return RngSeed{seed, detail::splitmix64(x)};
}

// xoshiro256++ with state expanded from (seed, stream) via splitmix64.
class Rng {
  public:
    explicit Rng(RngSeed key) {
        std::uint64_t x = key.seed;
        std::uint64_t mixed = detail::splitmix64(x) ^ key.stream;
        for (auto& word : state_) word = detail::splitmix64(mixed);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform in [0, 1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // integer in {0, ..., n-1}
    std::uint64_t below(std::uint64_t n) {
        // multiply-shift; bias negligible for n << 2^64 and irrelevant here
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    double exponential() {
        double u;
        do { u = next_double(); } while (u <= 0.0);
        return -std::log(u);
    }

    // exact for any mean >= 0 via cumulative exponential gaps, O(mean)
    long poisson(double mean) {
        if (mean <= 0.0) return 0;
        long count = 0;
        double acc = exponential();
        while (acc <= mean) {
            ++count;
            acc += exponential();
        }
        return count;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1, u2;
        do { u1 = next_double(); } while (u1 <= 0.0);
        u2 = next_double();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925286766559 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

  private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::uint64_t state_[4]{};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace ppgof
