#pragma once

#include <cstdint>
#include <cmath>
#include <limits>

namespace hwl {

// Stream-splitting hash; also used to expand a master seed into per-replicate
// seeds so that ensembles are order-independent.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(splitmix64(master) ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
}

// xoshiro256++ with splitmix64 seeding. Deterministic across platforms,
// unlike the std:: distributions.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) {
        std::uint64_t s = seed;
        for (auto& w : state_) {
            s = splitmix64(s);
            w = s;
        }
        have_gauss_ = false;
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<std::uint64_t>::max(); }

    result_type operator()() { return next(); }

    std::uint64_t next() {
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

    // Uniform on (0,1]: never returns 0, so it is safe as a quantile argument.
    double uniform_pos() {
        return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Uniform on [0,1).
    double uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    double normal() {
        if (have_gauss_) {
            have_gauss_ = false;
            return cached_gauss_;
        }
        // Marsaglia polar method.
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        cached_gauss_ = v * m;
        have_gauss_ = true;
        return u * m;
    }

    // +1 or -1 with equal probability.
    double rademacher() { return (next() >> 63) ? 1.0 : -1.0; }

    // Fair coin in {0,1}.
    std::uint64_t bit() { return next() >> 63; }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Lemire-style rejection; n is never close to 2^64 here.
        std::uint64_t x, r;
        do {
            x = next();
            r = x % n;
        } while (x - r > std::uint64_t(0) - n);
        return r;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
    bool have_gauss_;
    double cached_gauss_ = 0.0;
};

} // namespace hwl
