#pragma once

// Boundary regularity engine: Caratheodory quotients along rays, directional
// derivatives D_{-(tau1, tau2 M)} phi(tau), the K curve
//
//     K_tau(M) = D_{-(tau1, tau2 M)} phi(tau) / (-phi(tau)),
//
// Denjoy-Wolff classification of fixed boundary points, and one-variable
// slice analysis (slice Denjoy-Wolff points, interior fixed-point maps xi).
//
// K_tau is nonnegative and nondecreasing in M for B-points; the
// classification reads the curve:  constant alpha <= 1 -> Type I C-point;
// K < 1 throughout but nonconstant -> Type I without angular gradient;
// K(A) = 1 for a (unique) A -> Type II with constant A; K > 1 -> neither.
//
// Directional derivatives are sampled along tau - t*delta for a dyadic
// t-grid.  For M > 1 the probe direction is rescaled by homogeneity,
// D_{-(tau1, tau2 M)} = M * D_{-(tau1/M, tau2)}, so the ray stays inside the
// bidisk for the whole grid.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bidisk/geometry.hpp"
#include "bidisk/maps.hpp"
#include "bidisk/numerics.hpp"

namespace bidisk {

struct BoundaryError : std::runtime_error {
    enum class Kind {
        NoLimit,
        NonRealDerivative,
        NoRoot,
        NoInteriorFixedPoint,
        Undecided,
        IdentitySlice,
        Unclassifiable,
    };
    Kind kind;
    BoundaryError(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}
};

// Derivative stencil (see DESIGN): t0 = 1e-2 halved 18 times keeps the
// smallest step near 4e-8, above the 1e-8 cancellation floor.
inline constexpr double kRayT0 = 1e-2;
inline constexpr int kRaySteps = 18;

inline constexpr double kFixedTol = 1e-6;        // |phi(tau) - tau1| for fixedness
inline constexpr double kBoundaryValueTol = 1e-5;
inline constexpr double kImagResidualTol = 1e-6;
inline constexpr double kMonotoneSlack = 1e-7;

// ---------------------------------------------------------------------------
// Caratheodory quotient along the ray lambda_t = tau - t (tau1, tau2 M).
// ---------------------------------------------------------------------------

inline double radial_quotient(const ScalarMap& m, const BoundaryPoint& tau, double M, double t) {
    if (!(t > 0.0) || t * std::max(1.0, M) >= 1.0)
        throw std::invalid_argument("radial_quotient: need 0 < t*max(1,M) < 1");
    const Complex z1 = tau.t1 * (1.0 - t);
    const Complex z2 = tau.t2 * (1.0 - t * M);
    return (1.0 - std::abs(m(z1, z2))) / (1.0 - std::max(std::abs(z1), std::abs(z2)));
}

// ---------------------------------------------------------------------------
// Boundary value (radial limit) and fixedness.
// ---------------------------------------------------------------------------

struct BoundaryValue {
    Complex value;
    bool is_fixed_first_coord;
    double err;
};

inline BoundaryValue boundary_value(const ScalarMap& m, const BoundaryPoint& tau) {
    // Ray tau - t(tau1, tau2); when |tau2| < 1 only the first coordinate moves.
    std::vector<Complex> f(kRaySteps + 1);
    double t = kRayT0;
    for (int k = 0; k <= kRaySteps; ++k, t *= 0.5) {
        const Complex z1 = tau.t1 * (1.0 - t);
        const Complex z2 = tau.on_circle2 ? tau.t2 * (1.0 - t) : tau.t2;
        f[static_cast<std::size_t>(k)] = m(z1, z2);
    }
    const Extrapolated lim = extrapolate_limit(f);
    if (!lim.usable || lim.err > kBoundaryValueTol)
        throw BoundaryError(BoundaryError::Kind::NoLimit,
                            "boundary value: extrapolants disagree beyond 1e-5");
    return {lim.value, std::abs(lim.value - tau.t1) <= kFixedTol, lim.err};
}

// ---------------------------------------------------------------------------
// K_tau(M) by extrapolated one-sided differences.
// ---------------------------------------------------------------------------

struct KSample {
    double k;              // Re of D_{-delta_M} phi(tau) / (-phi(tau))
    double imag_residual;  // Im of the same quotient
    double err;            // extrapolation agreement estimate
};

inline KSample k_sample(const ScalarMap& m, const BoundaryPoint& tau, double M) {
    if (!(M > 0.0)) throw std::invalid_argument("k_sample: M must be positive");
    const double pre = std::max(1.0, M);
    const double c1 = 1.0 / pre, c2 = M / pre;

    std::vector<Complex> f(kRaySteps + 1);
    double t = kRayT0;
    for (int k = 0; k <= kRaySteps; ++k, t *= 0.5)
        f[static_cast<std::size_t>(k)] = m(tau.t1 * (1.0 - c1 * t), tau.t2 * (1.0 - c2 * t));

    const Extrapolated der = extrapolate_derivative(f, kRayT0);
    const Extrapolated val = extrapolate_limit(f);
    if (!der.usable || !val.usable)
        throw BoundaryError(BoundaryError::Kind::NoLimit, "k_sample: too few usable levels");
    const Complex d = pre * der.value;
    if (der.err * pre > 1e-3 * (1.0 + std::abs(d)) || !std::isfinite(std::abs(d)))
        throw BoundaryError(BoundaryError::Kind::NoLimit,
                            "k_sample: derivative extrapolation diverges");
    if (std::abs(val.value) < 1e-6)
        throw BoundaryError(BoundaryError::Kind::NoLimit,
                            "k_sample: boundary value too close to zero");
    const Complex q = d / (-val.value);
    return {q.real(), q.imag(), pre * der.err / std::abs(val.value)};
}

inline double k_value(const ScalarMap& m, const BoundaryPoint& tau, double M) {
    const KSample s = k_sample(m, tau, M);
    if (std::abs(s.imag_residual) > kImagResidualTol)
        throw BoundaryError(BoundaryError::Kind::NonRealDerivative,
                            "k_value: imaginary residual above 1e-6");
    return s.k;
}

// ---------------------------------------------------------------------------
// K curve over a log grid.
// ---------------------------------------------------------------------------

struct KCurve {
    BoundaryPoint tau;
    std::vector<double> m_grid;
    std::vector<double> k_values;
    std::vector<double> imag_residuals;
    std::vector<double> error_estimates;
    bool valid = true;     // all |imag_residual| <= 1e-6 and K >= -1e-7
    bool monotone = true;  // nondecreasing within 1e-7 slack
};

inline KCurve k_curve(const ScalarMap& m, const BoundaryPoint& tau, double m_min, double m_max,
                      int n) {
    if (!(m_min > 0.0) || !(m_min < m_max) || n < 2)
        throw std::invalid_argument("k_curve: need 0 < m_min < m_max and n >= 2");
    KCurve c;
    c.tau = tau;
    c.m_grid = log_grid(m_min, m_max, n);
    c.k_values.reserve(c.m_grid.size());
    for (const double M : c.m_grid) {
        const KSample s = k_sample(m, tau, M);
        c.k_values.push_back(s.k);
        c.imag_residuals.push_back(s.imag_residual);
        c.error_estimates.push_back(s.err);
        if (std::abs(s.imag_residual) > kImagResidualTol || s.k < -kMonotoneSlack)
            c.valid = false;
    }
    for (std::size_t i = 0; i + 1 < c.k_values.size(); ++i)
        if (c.k_values[i + 1] < c.k_values[i] - kMonotoneSlack) c.monotone = false;
    return c;
}

// ---------------------------------------------------------------------------
// Root of K_tau(M) = 1 (the Type II constant A).
// ---------------------------------------------------------------------------

// Bisection refreshing k_value at midpoints; the bracket is driven to a
// relative width of 1e-12, past the |K(A)-1| <= 1e-8 guarantee, so the two
// independent computations of A (K curve vs xi) can be compared at 1e-9.
inline double find_constant_a(const ScalarMap& m, const KCurve& curve) {
    const auto& ks = curve.k_values;
    const auto& ms = curve.m_grid;
    std::size_t cross = ks.size();
    for (std::size_t i = 0; i < ks.size(); ++i)
        if (ks[i] >= 1.0) {
            cross = i;
            break;
        }
    if (cross == 0 || cross == ks.size())
        throw BoundaryError(BoundaryError::Kind::NoRoot,
                            "find_constant_a: curve does not cross 1 on the grid");
    double lo = ms[cross - 1], hi = ms[cross];
    for (int it = 0; it < 200 && (hi - lo) > 1e-12 * std::max(1.0, lo); ++it) {
        const double mid = 0.5 * (lo + hi);
        (k_sample(m, curve.tau, mid).k < 1.0 ? lo : hi) = mid;
    }
    const double a = 0.5 * (lo + hi);
    if (std::abs(k_sample(m, curve.tau, a).k - 1.0) > 1e-8)
        throw BoundaryError(BoundaryError::Kind::NoRoot,
                            "find_constant_a: bisection failed to pin K(A)=1");
    return a;
}

// ---------------------------------------------------------------------------
// Slice analysis.
// ---------------------------------------------------------------------------

struct SliceDW {
    enum class Kind { InteriorFixed, BoundaryDW };
    Kind kind;
    // InteriorFixed
    DiskPoint fixed_point{};
    Complex multiplier{};
    // BoundaryDW
    Complex tau{};
    double alpha = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline constexpr std::size_t kSliceIterMax = 1'000'000;
inline constexpr double kSliceEscape = 1.0 - 1e-5;
inline constexpr double kInteriorBand = 1.0 - 1e-6;

template <typename F>
Complex newton_fixed_point(F&& s, Complex z, double target, int max_iter) {
    for (int i = 0; i < max_iter; ++i) {
        const Complex f = s(z) - z;
        if (std::abs(f) <= target) return z;
        const double h = 1e-7 * std::max(1e-3, 1.0 - std::abs(z));
        const Complex fp = (s(z + h) - s(z - h)) / (2.0 * h) - 1.0;
        if (std::abs(fp) < 1e-13) break;
        Complex dz = -f / fp;
        int halvings = 0;
        while (std::abs(z + dz) >= 1.0 - 1e-12 && halvings++ < 60) dz *= 0.5;
        z += dz;
    }
    return z;
}

// Radial quotient limit of a one-variable self-map toward a unimodular
// direction: alpha = lim (1 - |s(r tau)|) / (1 - r).
template <typename F>
double slice_angular_quotient(F&& s, const Complex& tau_hat) {
    std::vector<Complex> q;
    for (int k = 1; k <= 30; ++k) {
        const double t = std::ldexp(1.0, -k);
        q.push_back(Complex{(1.0 - std::abs(s(tau_hat * (1.0 - t)))) / t, 0.0});
    }
    const Extrapolated lim = extrapolate_limit(q);
    if (!lim.usable || lim.err > 1e-4)
        throw BoundaryError(BoundaryError::Kind::NoLimit,
                            "slice angular quotient does not extrapolate");
    return lim.value.real();
}

}  // namespace detail

// Denjoy-Wolff point of the slice, located by iteration from 0.  The orbit
// either Cauchy-converges inside the disk (interior fixed point, multiplier
// by central difference) or drifts to the boundary, in which case the
// escape direction is extrapolated and the angular derivative is read off
// the radial quotient.
inline SliceDW slice_denjoy_wolff(const ScalarMap& m, Side side, const Complex& fixed) {
    if (std::abs(fixed) >= 1.0)
        throw std::invalid_argument("slice_denjoy_wolff: |fixed| must be < 1");
    auto s = [&](const Complex& z) { return eval_slice(m, side, fixed, {z}); };
    if (std::abs(s(Complex{0.0, 0.0})) <= 1e-14 &&
        std::abs(s(Complex{0.3, 0.0}) - 0.3) <= 1e-14)
        throw BoundaryError(BoundaryError::Kind::IdentitySlice, "slice is the identity");

    Complex z{0.0, 0.0};
    std::vector<Complex> checkpoints;  // directions z/|z| at n = 2^j
    std::size_t next_checkpoint = 8;
    bool escaped = false, interior = false;
    for (std::size_t n = 1; n <= detail::kSliceIterMax; ++n) {
        const Complex w = s(z);
        const double step = std::abs(w - z);
        z = w;
        const double az = std::abs(z);
        if (n == next_checkpoint) {
            if (az > 0.1) checkpoints.push_back(z / az);
            next_checkpoint *= 2;
        }
        if (az > detail::kSliceEscape) {
            escaped = true;
            checkpoints.push_back(z / az);
            break;
        }
        if (step <= 1e-13) {
            interior = true;
            break;
        }
    }

    if (interior && std::abs(z) <= detail::kInteriorBand) {
        const Complex p = detail::newton_fixed_point(s, z, 1e-14, 10);
        if (std::abs(s(p) - p) > 1e-10 || std::abs(p) > detail::kInteriorBand)
            throw BoundaryError(BoundaryError::Kind::Undecided,
                                "slice orbit converged but fixed point did not verify");
        const double h = 1e-6;
        const Complex mult = (s(p + h) - s(p - h)) / (2.0 * h);
        return {SliceDW::Kind::InteriorFixed, DiskPoint{p}, mult, Complex{}, 0.0};
    }
    if (!escaped)
        throw BoundaryError(BoundaryError::Kind::Undecided,
                            "slice orbit stalled (near-parabolic)");

    const Extrapolated dir = extrapolate_limit(checkpoints);
    Complex tau_hat = dir.usable ? dir.value : checkpoints.back();
    tau_hat /= std::abs(tau_hat);
    const double alpha = detail::slice_angular_quotient(s, tau_hat);
    if (alpha > 1.0 + 1e-6)
        throw BoundaryError(BoundaryError::Kind::Undecided,
                            "slice escape direction has angular quotient above 1");
    return {SliceDW::Kind::BoundaryDW, DiskPoint{}, Complex{}, tau_hat, alpha};
}

// Interior fixed point xi(fixed) of the slice (eta for side = Right).
// Picard from 0 with a damped-Newton fallback once the contraction ratio
// exceeds 0.999; the accepted point has residual <= 1e-10.
inline DiskPoint slice_fixed_point(const ScalarMap& m, Side side, const Complex& fixed) {
    auto s = [&](const Complex& z) { return eval_slice(m, side, fixed, {z}); };
    Complex z{0.0, 0.0};
    double prev_step = std::numeric_limits<double>::infinity();
    int stalled = 0;
    bool converged = false;
    for (std::size_t n = 0; n < 200'000; ++n) {
        const Complex w = s(z);
        const double step = std::abs(w - z);
        if (std::abs(w) > 1.0 - 1e-7)
            throw BoundaryError(BoundaryError::Kind::NoInteriorFixedPoint,
                                "slice orbit escapes to the boundary");
        z = w;
        if (step <= 5e-14) {
            converged = true;
            break;
        }
        stalled = step > 0.999 * prev_step ? stalled + 1 : 0;
        prev_step = step;
        if (stalled >= 50) break;  // Picard too slow; polish with Newton
    }
    z = detail::newton_fixed_point(s, z, 1e-13, converged ? 8 : 300);
    if (std::abs(s(z) - z) > 1e-10 || std::abs(z) > detail::kInteriorBand)
        throw BoundaryError(BoundaryError::Kind::NoInteriorFixedPoint,
                            "no interior fixed point found for slice");
    return DiskPoint{z};
}

// The Type II constant recovered from the fixed-point map:
// A = [liminf_{z -> tau2} (1-|xi(z)|)/(1-|z|)]^{-1}, probed radially at
// mu_k = tau2 (1 - 2^-k) and extrapolated.
inline double a_from_xi(const ScalarMap& m, const BoundaryPoint& tau, Side side) {
    if (side == Side::Right) {
        const BoundaryPoint swapped{tau.t2, tau.t1, tau.on_circle2, tau.on_circle1};
        return a_from_xi(swap_args(m), swapped, Side::Left);
    }
    std::vector<Complex> q;
    for (int k = 3; k <= 19; ++k) {
        const double t = std::ldexp(1.0, -k);
        DiskPoint xi;
        try {
            xi = slice_fixed_point(m, Side::Left, tau.t2 * (1.0 - t));
        } catch (const BoundaryError&) {
            if (q.size() >= 6) break;  // xi left the workable interior; extrapolate what we have
            throw;
        }
        q.push_back(Complex{(1.0 - std::abs(xi.z)) / t, 0.0});
        if (1.0 - std::abs(xi.z) < 4e-6) break;  // next level would hug the interior band
    }
    const Extrapolated lim = extrapolate_limit(q);
    if (!lim.usable || lim.err > 1e-3 * (1.0 + std::abs(lim.value)))
        throw BoundaryError(BoundaryError::Kind::NoLimit,
                            "a_from_xi: radial quotient of xi does not extrapolate");
    const double reciprocal = lim.value.real();
    if (!(reciprocal > 0.0))
        throw BoundaryError(BoundaryError::Kind::NoLimit,
                            "a_from_xi: nonpositive boundary quotient");
    return 1.0 / reciprocal;
}

// ---------------------------------------------------------------------------
// Denjoy-Wolff classification.
// ---------------------------------------------------------------------------

struct DWClass {
    enum class Kind {
        NotFixed,      // boundary value differs from tau1
        NotBPoint,     // Caratheodory condition fails (derivative diverges)
        TypeI_CPoint,  // K constant alpha <= 1
        TypeI_NonC,    // K nonconstant, < 1 throughout; k_limit = lim K(M)
        TypeII,        // K crosses 1 at M = A
        Neither,       // K > 1 throughout (or constant > 1)
        Ambiguous,     // K(M_max) hugs 1 and no crossing bracketed
    };
    Kind kind = Kind::NotFixed;
    double alpha = std::numeric_limits<double>::quiet_NaN();
    double k_limit = std::numeric_limits<double>::quiet_NaN();
    double constant_a = std::numeric_limits<double>::quiet_NaN();
    double k_min = std::numeric_limits<double>::quiet_NaN();
    std::string diagnostics;

    DWClass() = default;
    explicit DWClass(Kind k, std::string diag = "") : kind(k), diagnostics(std::move(diag)) {}
};

inline const char* to_string(DWClass::Kind k) {
    switch (k) {
        case DWClass::Kind::NotFixed: return "NotFixed";
        case DWClass::Kind::NotBPoint: return "NotBPoint";
        case DWClass::Kind::TypeI_CPoint: return "TypeI_CPoint";
        case DWClass::Kind::TypeI_NonC: return "TypeI_NonC";
        case DWClass::Kind::TypeII: return "TypeII";
        case DWClass::Kind::Neither: return "Neither";
        case DWClass::Kind::Ambiguous: return "Ambiguous";
    }
    return "?";
}

struct ClassifyOptions {
    double m_min = std::ldexp(1.0, -12);
    double m_max = std::ldexp(1.0, 12);
    int grid_n = 49;
    double eta = 1e-4;  // classification margin around K = 1
};

namespace detail {

// k_limit for the non-C-point Type I case: linear extrapolation of K
// against 1/M over the top decade of the grid.
inline double extrapolate_k_limit(const KCurve& c) {
    std::vector<double> x, y;
    const double lo = c.m_grid.back() / 10.0;
    for (std::size_t i = 0; i < c.m_grid.size(); ++i)
        if (c.m_grid[i] >= lo) {
            x.push_back(1.0 / c.m_grid[i]);
            y.push_back(c.k_values[i]);
        }
    return fit_line(x, y).intercept;
}

inline DWClass classify_on_grid(const ScalarMap& m, const BoundaryPoint& tau,
                                const ClassifyOptions& opt, bool widened) {
    KCurve curve;
    try {
        curve = k_curve(m, tau, opt.m_min, opt.m_max, opt.grid_n);
    } catch (const BoundaryError& e) {
        if (e.kind == BoundaryError::Kind::NoLimit)
            return DWClass(DWClass::Kind::NotBPoint, e.what());
        throw;
    }
    if (!curve.valid)
        return DWClass(DWClass::Kind::NotBPoint,
                       "imaginary residual above 1e-6 on the K grid");

    double kmin = curve.k_values.front(), kmax = kmin, mean = 0.0;
    for (const double v : curve.k_values) {
        kmin = std::min(kmin, v);
        kmax = std::max(kmax, v);
        mean += v;
    }
    mean /= static_cast<double>(curve.k_values.size());

    const double eps_const = 1e-6 * (1.0 + mean);
    if (kmax - kmin < eps_const) {
        if (mean <= 1.0 + 1e-4) {
            DWClass r(DWClass::Kind::TypeI_CPoint);
            r.alpha = mean;
            return r;
        }
        DWClass r(DWClass::Kind::Neither);
        r.k_min = kmin;
        r.diagnostics = "constant K above 1";
        return r;
    }

    const double k_at_max = curve.k_values.back();
    const double k_at_min = curve.k_values.front();
    if (k_at_max < 1.0 - opt.eta) {
        DWClass r(DWClass::Kind::TypeI_NonC);
        r.k_limit = extrapolate_k_limit(curve);
        return r;
    }
    if (k_at_min > 1.0 + opt.eta) {
        DWClass r(DWClass::Kind::Neither);
        r.k_min = k_at_min;
        return r;
    }
    if (k_at_min < 1.0 - opt.eta && k_at_max > 1.0 + opt.eta) {
        DWClass r(DWClass::Kind::TypeII);
        r.constant_a = find_constant_a(m, curve);
        return r;
    }
    // K hugs 1 at an endpoint with no bracketed crossing: widen once.
    if (!widened) {
        ClassifyOptions wide = opt;
        wide.m_min /= 4.0;
        wide.m_max *= 4.0;
        return classify_on_grid(m, tau, wide, true);
    }
    DWClass r(DWClass::Kind::Ambiguous);
    r.k_min = kmin;
    r.diagnostics = "K(M) within eta of 1 at a grid endpoint after widening; K in [" +
                    std::to_string(kmin) + ", " + std::to_string(kmax) + "]";
    return r;
}

}  // namespace detail

inline DWClass classify_dw(const ScalarMap& m, const BoundaryPoint& tau, Side side,
                           const ClassifyOptions& opt = {}) {
    if (side == Side::Right) {
        const BoundaryPoint swapped{tau.t2, tau.t1, tau.on_circle2, tau.on_circle1};
        return classify_dw(swap_args(m), swapped, Side::Left, opt);
    }
    if (!tau.on_circle1)
        throw std::invalid_argument("classify_dw: left classification needs |tau1| = 1");

    // Facial point: the slice through tau2 decides (the facial K curve is
    // constant, so only the C-point row of the classification can apply).
    if (!tau.on_circle2) {
        SliceDW slice;
        try {
            slice = slice_denjoy_wolff(m, Side::Left, tau.t2);
        } catch (const BoundaryError& e) {
            return DWClass(DWClass::Kind::Ambiguous,
                           std::string("facial slice analysis failed: ") + e.what());
        }
        if (slice.kind == SliceDW::Kind::BoundaryDW && std::abs(slice.tau - tau.t1) <= kFixedTol) {
            DWClass r(DWClass::Kind::TypeI_CPoint);
            r.alpha = slice.alpha;
            return r;
        }
        const BoundaryValue bv = boundary_value(m, tau);
        if (!bv.is_fixed_first_coord) return DWClass(DWClass::Kind::NotFixed);
        try {
            DWClass r(DWClass::Kind::Neither);
            r.k_min = k_value(m, tau, 1.0);
            r.diagnostics = "fixed facial point that is not the slice Denjoy-Wolff point";
            return r;
        } catch (const BoundaryError&) {
            return DWClass(DWClass::Kind::NotBPoint);
        }
    }

    BoundaryValue bv;
    try {
        bv = boundary_value(m, tau);
    } catch (const BoundaryError&) {
        return DWClass(DWClass::Kind::NotBPoint, "no radial limit");
    }
    if (!bv.is_fixed_first_coord) {
        DWClass r(DWClass::Kind::NotFixed);
        r.diagnostics = "boundary value does not fix tau1";
        return r;
    }
    try {
        k_sample(m, tau, opt.m_max);
    } catch (const BoundaryError&) {
        return DWClass(DWClass::Kind::NotBPoint, "directional derivative diverges");
    }
    return detail::classify_on_grid(m, tau, opt, false);
}

}  // namespace bidisk
