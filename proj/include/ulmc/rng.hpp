#ifndef ULMC_RNG_HPP
#define ULMC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace ulmc {

// Deterministic per-purpose random streams.
//
// Every consumer (deployment, one radio link, the blockage scheduler, ...)
// gets its own stream keyed by (master seed, purpose tag, entity ids), so
// simulation results are bit-identical no matter how work is scheduled and
// never depend on standard-library distribution internals, which vary
// between implementations.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stream purposes. Values are part of the reproducibility contract: adding
// new purposes at the end keeps old seeds stable.
enum class StreamTag : std::uint64_t {
    Deployment = 1,
    LinkLargeScale = 2,
    LinkSmallScale = 3,
    Blockage = 4,
    Runs = 5,
    Generic = 6,
};

class RngStream {
  public:
    RngStream() : RngStream(0, StreamTag::Generic, 0, 0) {}

    RngStream(std::uint64_t master_seed, StreamTag tag,
              std::uint64_t id_a = 0, std::uint64_t id_b = 0) {
        // Mix seed and identifiers through splitmix64 so that nearby
        // (seed, id) tuples land in unrelated regions of state space.
        std::uint64_t m = master_seed;
        std::uint64_t h = splitmix64(m);
        m ^= static_cast<std::uint64_t>(tag) * 0x9e3779b97f4a7c15ULL;
        h ^= splitmix64(m);
        m ^= id_a + 0x165667b19e3779f9ULL;
        h ^= splitmix64(m);
        m ^= id_b + 0x27d4eb2f165667c5ULL;
        h ^= splitmix64(m);
        for (auto& word : s_) word = splitmix64(h);
    }

    // xoshiro256** step (Blackman/Vigna).
    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

    // Box-Muller without caching the spare draw; consuming a fixed number
    // of raw values per call keeps stream consumption easy to reason about.
    double normal(double mean = 0.0, double stddev = 1.0) {
        double u1 = u01();
        while (u1 <= 0.0) u1 = u01();
        const double u2 = u01();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * mag * std::cos(2.0 * M_PI * u2);
    }

    double exponential(double rate = 1.0) {
        if (rate <= 0.0) throw std::invalid_argument("exponential: rate must be > 0");
        double u = u01();
        while (u <= 0.0) u = u01();
        return -std::log(u) / rate;
    }

    // Knuth product-of-uniforms sampler. Fine for the means used here
    // (deployment counts, cluster counts); exp(-mean) stays well above
    // double underflow for mean < ~700.
    int poisson(double mean) {
        if (mean < 0.0) throw std::invalid_argument("poisson: mean must be >= 0");
        if (mean == 0.0) return 0;
        if (mean > 600.0) {
            // Normal approximation guard; not hit by any shipped preset.
            const double x = normal(mean, std::sqrt(mean));
            return x < 0.0 ? 0 : static_cast<int>(std::lround(x));
        }
        const double limit = std::exp(-mean);
        double prod = 1.0;
        int count = -1;
        do {
            prod *= u01();
            ++count;
        } while (prod > limit);
        return count;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

}  // namespace ulmc

#endif
