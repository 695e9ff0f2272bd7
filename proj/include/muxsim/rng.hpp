#pragma once

#include <cmath>
#include <cstdint>

namespace muxsim {

inline std::uint64_t splitmix64_next(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t v) {
    return splitmix64_next(v);
}

/// Seeded substream of the run-level random sequence.
///
/// A stream is fully determined by (seed, stream_id): identical inputs
/// reproduce identical draws bit for bit on every platform, which is why the
/// samplers below are hand-rolled instead of using std:: distributions
/// (those are implementation-defined). Cycle-level code derives stream_id
/// from (cycle index, purpose), so draws never depend on execution order.
class RandomStream {
  public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_id) {
        std::uint64_t key = mix64(seed ^ 0x5851f42d4c957f2dULL);
        key = mix64(key ^ stream_id);
        for (auto& word : state_) {
            word = splitmix64_next(key);
        }
        // xoshiro dislikes the all-zero state; splitmix output makes this
        // practically unreachable, but keep the guard explicit.
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
            state_[0] = 0x9e3779b97f4a7c15ULL;
        }
    }

    /// Stream for one (cycle, purpose) slot. purpose < 64.
    static RandomStream for_cycle(std::uint64_t seed, std::int64_t cycle, unsigned purpose) {
        return RandomStream(seed, static_cast<std::uint64_t>(cycle) * 64u + purpose);
    }

    // xoshiro256**
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

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return uniform() < p;
    }

    /// Poisson draw by Knuth's product method; exact and fast for the small
    /// means used here (pairs per 100 ns bin, dark counts per window).
    int poisson(double mean) {
        if (mean <= 0.0) return 0;
        const double limit = std::exp(-mean);
        double prod = 1.0;
        int k = -1;
        do {
            ++k;
            prod *= uniform();
        } while (prod > limit);
        return k;
    }

    /// Same, with exp(-mean) precomputed by the caller (hot loops).
    int poisson_with_limit(double exp_neg_mean) {
        double prod = 1.0;
        int k = -1;
        do {
            ++k;
            prod *= uniform();
        } while (prod > exp_neg_mean);
        return k;
    }

    /// Geometric photon number of a single thermal (Bose-Einstein) mode with
    /// the given mean: P(k) = s^k (1-s), s = mean / (1 + mean).
    int thermal_mode(double mean) {
        if (mean <= 0.0) return 0;
        const double s = mean / (1.0 + mean);
        // 1 - uniform() lies in (0, 1]; log of it is finite.
        const double u = 1.0 - uniform();
        return static_cast<int>(std::log(u) / std::log(s));
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

} // namespace muxsim
