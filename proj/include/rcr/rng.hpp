#ifndef RCR_RNG_HPP
#define RCR_RNG_HPP

#include <cmath>
#include <cstdint>

namespace rcr {

// splitmix64 step; also used to derive stream keys.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_keys(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a;
    std::uint64_t h = splitmix64(s);
    s = h ^ (b + 0x9e3779b97f4a7c15ULL);
    return splitmix64(s);
}

// xoshiro256++ with splitmix64 seeding. Streams are derived from
// (seed, index) keys so per-sample generators are reproducible and
// independent of evaluation order across workers.
class Rng {
public:
    explicit Rng(std::uint64_t seed) { reseed(seed); }
    Rng(std::uint64_t seed, std::uint64_t stream) { reseed(mix_keys(seed, stream)); }

    void reseed(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    std::uint64_t next_u64() {
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

    // Uniform in (0, 1]; never returns 0 so log() is safe.
    double uniform() {
        return ((next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Standard normal via Box-Muller (single value; stateless draw).
    double gaussian() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    double exponential() { return -std::log(uniform()); }

    // Knuth inversion; means in this project stay small (< ~30).
    long poisson(double mean) {
        if (mean <= 0) return 0;
        if (mean < 60.0) {
            const double limit = std::exp(-mean);
            double prod = 1.0;
            long n = -1;
            do {
                ++n;
                prod *= uniform();
            } while (prod > limit);
            return n;
        }
        // Gaussian approximation guard for large means.
        const double g = mean + std::sqrt(mean) * gaussian();
        return g < 0 ? 0 : static_cast<long>(g + 0.5);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4] = {};
};

} // namespace rcr

#endif
