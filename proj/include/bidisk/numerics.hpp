#pragma once

// Shared numerical kernels: Richardson extrapolation of one-sided limits and
// derivatives sampled on dyadic grids t_k = t0 * 2^-k, and a least-squares
// line fit.  Extrapolant selection is noise-aware: among the highest-order
// extrapolants the one with the best successive agreement wins, scanning
// from the largest t so that pure-roundoff plateaus resolve to the
// best-conditioned level.

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "bidisk/geometry.hpp"

namespace bidisk {

struct Extrapolated {
    Complex value{0.0, 0.0};
    double err = std::numeric_limits<double>::infinity();  // successive-agreement estimate
    int level = -1;
    bool usable = false;
};

// Limit of a sequence v_k -> L assumed to behave like L + c*2^-k + O(4^-k).
inline Extrapolated extrapolate_limit(const std::vector<Complex>& v) {
    Extrapolated out;
    if (v.size() < 3) return out;
    std::vector<Complex> r(v.size() - 1);
    for (std::size_t k = 0; k + 1 < v.size(); ++k) r[k] = 2.0 * v[k + 1] - v[k];
    for (std::size_t k = 1; k < r.size(); ++k) {
        const double d = std::abs(r[k] - r[k - 1]);
        if (d < out.err) {
            out.err = d;
            out.value = r[k];
            out.level = static_cast<int>(k);
        }
    }
    out.usable = out.level >= 0;
    return out;
}

// One-sided derivative at t -> 0+ from samples f_k = f(t_k), t_k = t0*2^-k.
// Consecutive-sample quotients (no f(0) needed) have a full asymptotic
// expansion in t, removed by two Richardson stages.
inline Extrapolated extrapolate_derivative(const std::vector<Complex>& f, double t0) {
    Extrapolated out;
    if (f.size() < 4) return out;
    const std::size_t n = f.size() - 1;
    std::vector<Complex> d(n);
    double t = t0;
    for (std::size_t k = 0; k < n; ++k, t *= 0.5) d[k] = 2.0 * (f[k] - f[k + 1]) / t;
    std::vector<Complex> r1(n - 1), r2(n - 2);
    for (std::size_t k = 0; k + 1 < n; ++k) r1[k] = 2.0 * d[k + 1] - d[k];
    for (std::size_t k = 0; k + 2 < n; ++k) r2[k] = (4.0 * r1[k + 1] - r1[k]) / 3.0;
    for (std::size_t k = 1; k < r2.size(); ++k) {
        const double agree = std::abs(r2[k] - r2[k - 1]);
        if (agree < out.err) {
            out.err = agree;
            out.value = r2[k];
            out.level = static_cast<int>(k);
        }
    }
    out.usable = out.level >= 0;
    return out;
}

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = static_cast<double>(n) * sxx - sx * sx;
    if (det == 0.0) return {n ? sy / static_cast<double>(n) : 0.0, 0.0};
    return {(sxx * sy - sx * sxy) / det, (static_cast<double>(n) * sxy - sx * sy) / det};
}

// n log-spaced values over [lo, hi], endpoints included.
inline std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] =
            n == 1 ? lo : std::exp(llo + (lhi - llo) * static_cast<double>(i) / (n - 1));
    if (n > 1) {
        g.front() = lo;
        g.back() = hi;
    }
    return g;
}

}  // namespace bidisk
