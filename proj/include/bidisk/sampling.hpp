#pragma once

// Deterministic low-discrepancy sampling of the bidisk: a 4-dimensional
// Halton sequence (bases 2,3,5,7) with a seeded Cranley-Patterson rotation,
// mapped per coordinate by the polar transform r = sqrt(u).  Radii are
// capped at 1 - 1e-6 so the horocycle quotients stay finite.

#include <array>
#include <cmath>
#include <cstdint>

#include "bidisk/geometry.hpp"

namespace bidisk {

// ASCII bytes of "DW2"; env var DW_SEED / --seed override at the CLI level.
inline constexpr std::uint64_t kDefaultSeed = 0x445732;

inline constexpr double kSampleRadiusCap = 1.0 - 1e-6;

inline double radical_inverse(std::uint64_t n, std::uint32_t base) {
    double inv = 1.0 / base, f = inv, r = 0.0;
    while (n > 0) {
        r += f * static_cast<double>(n % base);
        n /= base;
        f *= inv;
    }
    return r;
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class BidiskSampler {
  public:
    explicit BidiskSampler(std::uint64_t seed = kDefaultSeed) {
        std::uint64_t state = seed;
        for (double& s : shift_)
            s = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
    }

    // i-th point of the sequence (i >= 0).
    BidiskPoint operator()(std::uint64_t i) const {
        static constexpr std::uint32_t bases[4] = {2, 3, 5, 7};
        std::array<double, 4> u;
        for (int d = 0; d < 4; ++d) {
            double v = radical_inverse(i + 1, bases[d]) + shift_[d];
            u[d] = v - std::floor(v);
        }
        return {disk(u[0], u[1]), disk(u[2], u[3])};
    }

  private:
    static Complex disk(double u, double v) {
        const double r = std::min(std::sqrt(u), kSampleRadiusCap);
        const double th = 2.0 * M_PI * v;
        return {r * std::cos(th), r * std::sin(th)};
    }

    double shift_[4];
};

}  // namespace bidisk
