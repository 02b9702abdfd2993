#ifndef RLRA_RNG_HPP
#define RLRA_RNG_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rlra::rng {

/// splitmix64 finalizer. Used as the mixing primitive for all seed derivation
/// so that every random quantity is a pure function of (seed, role, indices).
inline uint64_t mix(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t chain(uint64_t h, uint64_t v) {
    return mix(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

inline uint64_t derive(uint64_t seed, uint64_t a) { return chain(mix(seed), a); }
inline uint64_t derive(uint64_t seed, uint64_t a, uint64_t b) { return chain(derive(seed, a), b); }
inline uint64_t derive(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
    return chain(derive(seed, a, b), c);
}
inline uint64_t derive(uint64_t seed, uint64_t a, uint64_t b, uint64_t c, uint64_t d) {
    return chain(derive(seed, a, b, c), d);
}

/// Maps a 64-bit hash to the open interval (0,1).
inline double to_u01(uint64_t h) {
    return (static_cast<double>(h >> 11) + 0.5) * (1.0 / 9007199254740992.0);  // 2^-53
}

/// Draws from the standard symmetric p-stable law, p in [1,2].
///   p = 1: Cauchy via inverse CDF of u1.
///   p = 2: unit Gaussian via Box-Muller on (u1, u2).
///   1 < p < 2: Chambers-Mallows-Stuck transform of (u1, u2).
/// u1, u2 exactly on {0,1} are rejected: throws std::domain_error as a
/// resample signal (never triggered by to_u01, which is open).
inline double sample_stable(double p, double u1, double u2) {
    if (!(p >= 1.0 && p <= 2.0)) throw std::invalid_argument("sample_stable: p must be in [1,2]");
    if (u1 <= 0.0 || u1 >= 1.0 || u2 <= 0.0 || u2 >= 1.0)
        throw std::domain_error("sample_stable: uniform at boundary, resample");
    if (p == 1.0) return std::tan(M_PI * (u1 - 0.5));
    if (p == 2.0) return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    const double theta = M_PI * (u1 - 0.5);
    const double w = -std::log(u2);  // Exp(1)
    const double a = std::sin(p * theta) / std::pow(std::cos(theta), 1.0 / p);
    const double b = std::pow(std::cos((1.0 - p) * theta) / w, (1.0 - p) / p);
    return a * b;
}

/// Degree-(w-1) polynomial hash over the field F_p with p = 2^61 - 1.
/// Evaluations at distinct points are jointly w-wise independent.
class PolyHash {
  public:
    static constexpr uint64_t kPrime = (uint64_t{1} << 61) - 1;

    PolyHash(uint64_t seed, int degree_w) {
        if (degree_w < 2) throw std::invalid_argument("PolyHash: w must be >= 2");
        coeff_.resize(static_cast<size_t>(degree_w));
        for (size_t t = 0; t < coeff_.size(); ++t)
            coeff_[t] = mix(chain(seed, t)) % kPrime;
    }

    uint64_t eval(uint64_t x) const {
        x %= kPrime;
        uint64_t acc = 0;
        for (size_t t = coeff_.size(); t-- > 0;) acc = add_mod(mul_mod(acc, x), coeff_[t]);
        return acc;
    }

    /// Evaluation at (index+1), mapped into (0,1).
    double u01_at(uint64_t index) const {
        return (static_cast<double>(eval(index + 1)) + 0.5) / static_cast<double>(kPrime);
    }

  private:
    static uint64_t mul_mod(uint64_t a, uint64_t b) {
        __uint128_t z = static_cast<__uint128_t>(a) * b;
        uint64_t lo = static_cast<uint64_t>(z & kPrime);
        uint64_t hi = static_cast<uint64_t>(z >> 61);
        uint64_t r = lo + hi;
        if (r >= kPrime) r -= kPrime;
        return r;
    }
    static uint64_t add_mod(uint64_t a, uint64_t b) {
        uint64_t r = a + b;
        if (r >= kPrime) r -= kPrime;
        return r;
    }

    std::vector<uint64_t> coeff_;
};

/// Fully independent counter-mode uniform: pure function of the inputs.
inline double u01(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
    return to_u01(derive(seed, a, b, c));
}

/// Standard normal, counter-mode.
inline double gaussian(uint64_t seed, uint64_t a, uint64_t b) {
    return sample_stable(2.0, to_u01(derive(seed, a, b, 0)), to_u01(derive(seed, a, b, 1)));
}

}  // namespace rlra::rng

#endif
