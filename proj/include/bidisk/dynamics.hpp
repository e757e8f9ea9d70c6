#pragma once

// Iteration engine for self-maps F = (phi, psi) of the bidisk: orbits with
// horosphere-radius telemetry, Earle-Hamilton scaled fixed points of rF,
// Denjoy-Wolff location by continuation r -> 1, and the five-way case report
// for the behavior of the iterate sequence.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bidisk/boundary.hpp"
#include "bidisk/geometry.hpp"
#include "bidisk/maps.hpp"
#include "bidisk/numerics.hpp"

namespace bidisk {

struct DynamicsError : std::runtime_error {
    enum class Kind { MaxIterations };
    Kind kind;
    DynamicsError(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}
};

// Beyond this coordinate modulus the radius functionals lose all digits.
inline constexpr double kOrbitHaltModulus = 1.0 - 1e-14;

struct Orbit {
    std::vector<BidiskPoint> points;  // F^0 z0 ... F^n z0
    std::vector<double> a_seq;        // A_k = |tau1 - phi_k|^2 / (1 - |phi_k|^2)
    std::vector<double> b_seq;
    std::vector<double> r_seq;        // max{A_k, B_k / K}
    BoundaryPoint tau;
    double weight_k = 1.0;
    bool halted_early = false;
};

inline Orbit iterate_orbit(const SelfMap2& F, const BidiskPoint& z0, std::size_t n,
                           const BoundaryPoint& tau, double K) {
    if (n < 1) throw std::invalid_argument("iterate_orbit: n >= 1");
    if (!(K > 0.0)) throw std::invalid_argument("iterate_orbit: K > 0");
    Orbit orbit;
    orbit.tau = tau;
    orbit.weight_k = K;
    orbit.points.reserve(n + 1);
    auto push = [&](const BidiskPoint& z) {
        const HorosphereRadii r = horosphere_radii(tau, z);
        orbit.points.push_back(z);
        orbit.a_seq.push_back(r.a);
        orbit.b_seq.push_back(r.b);
        orbit.r_seq.push_back(std::max(r.a, r.b / K));
    };
    push(z0);
    BidiskPoint z = z0;
    for (std::size_t k = 0; k < n; ++k) {
        z = F(z);
        if (sup_norm(z) > kOrbitHaltModulus) {
            orbit.halted_early = true;
            break;
        }
        push(z);
    }
    return orbit;
}

// Unique fixed point of rF (Earle-Hamilton: rF maps the bidisk strictly
// inside itself).  Plain Picard iteration from `start` until the step is
// below 1e-13; the accepted point has residual <= 1e-12.
inline BidiskPoint picard_fixed_point(const SelfMap2& F, double r,
                                      BidiskPoint start = {{0.0, 0.0}, {0.0, 0.0}},
                                      std::size_t max_iters = 50'000'000) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("picard_fixed_point: 0 < r < 1");
    BidiskPoint z = start;
    for (std::size_t i = 0; i < max_iters; ++i) {
        const BidiskPoint fz = F(z);
        const BidiskPoint w{r * fz.z1, r * fz.z2};
        const double step = sup_dist(z, w.z1, w.z2);
        z = w;
        if (step <= 1e-13) {
            const BidiskPoint check = F(z);
            if (sup_dist(z, r * check.z1, r * check.z2) <= 1e-12) return z;
        }
    }
    throw DynamicsError(DynamicsError::Kind::MaxIterations,
                        "picard_fixed_point: stagnated before reaching the step tolerance");
}

struct ContinuationStage {
    int k;
    double r;
    BidiskPoint fixed_point;
    double residual;
    double ratio;  // (1 - |lambda|^2) / (1 - |mu|^2)
};

struct ContinuationResult {
    std::vector<ContinuationStage> stages;
    BoundaryPoint tau_estimate{};
    double k_estimate = std::numeric_limits<double>::quiet_NaN();
    bool degenerate = false;           // fixed-point ratio trending to 0 or infinity
    bool interior_fixed_point = false; // fixed points converge strictly inside
    bool truncated = false;            // a stage hit MaxIterations
};

// Continuation along r = 1 - 2^-k, k = 1..k_max, warm-starting each stage.
// K is estimated from a log-linear fit of the ratio over the last five
// accepted stages; |slope| > 0.05 per stage flags the Type I degeneration.
inline ContinuationResult continuation_dw(const SelfMap2& F, int k_max) {
    if (F.phi.is_projection(1) || F.psi.is_projection(2))
        throw std::invalid_argument("continuation_dw: component is a coordinate projection");
    ContinuationResult res;
    BidiskPoint z{{0.0, 0.0}, {0.0, 0.0}};
    for (int k = 1; k <= k_max; ++k) {
        const double r = 1.0 - std::ldexp(1.0, -k);
        try {
            z = picard_fixed_point(F, r, z);
        } catch (const DynamicsError&) {
            res.truncated = true;
            break;
        }
        const BidiskPoint fz = F(z);
        const double residual = sup_dist(z, r * fz.z1, r * fz.z2);
        const double ratio = (1.0 - std::norm(z.z1)) / (1.0 - std::norm(z.z2));
        res.stages.push_back({k, r, z, residual, ratio});
    }
    if (res.stages.empty()) return res;

    const BidiskPoint last = res.stages.back().fixed_point;
    if (res.stages.size() >= 2) {
        const BidiskPoint prev = res.stages[res.stages.size() - 2].fixed_point;
        if (sup_norm(last) < 0.9 && sup_dist(prev, last.z1, last.z2) < 1e-9)
            res.interior_fixed_point = true;
    }
    if (!res.interior_fixed_point) {
        res.tau_estimate = BoundaryPoint{last.z1 / std::abs(last.z1), last.z2 / std::abs(last.z2),
                                         true, true};
    }

    const std::size_t fit_n = std::min<std::size_t>(5, res.stages.size());
    std::vector<double> xs, ys;
    for (std::size_t i = res.stages.size() - fit_n; i < res.stages.size(); ++i) {
        xs.push_back(static_cast<double>(res.stages[i].k));
        ys.push_back(std::log(res.stages[i].ratio));
    }
    const LineFit fit = fit_line(xs, ys);
    if (std::abs(fit.slope) > 0.05) {
        res.degenerate = true;
    } else {
        res.k_estimate = 1.0 / std::exp(fit.intercept + fit.slope * xs.back());
    }
    return res;
}

// ---------------------------------------------------------------------------
// Case report for the iterate sequence.
// ---------------------------------------------------------------------------

struct HerveCase {
    enum class Case { CoordProjection, I_I, I_II, II_I, II_II };
    Case kind;
    std::string expected;  // predicted limit behavior of {F^n}
    bool refined = false;  // non-C-point refinement applies
    DWClass phi_class;
    DWClass psi_class;
};

inline const char* to_string(HerveCase::Case c) {
    switch (c) {
        case HerveCase::Case::CoordProjection: return "coord_projection";
        case HerveCase::Case::I_I: return "I_I";
        case HerveCase::Case::I_II: return "I_II";
        case HerveCase::Case::II_I: return "II_I";
        case HerveCase::Case::II_II: return "II_II";
    }
    return "?";
}

inline HerveCase herve_case(const SelfMap2& F, const BoundaryPoint& tau_hint,
                            const ClassifyOptions& opt = {}) {
    HerveCase hc{};
    if (F.phi.is_projection(1) || F.psi.is_projection(2)) {
        hc.kind = HerveCase::Case::CoordProjection;
        hc.expected = F.psi.is_projection(2)
                          ? "iterates converge to (tau1, pi2) for some unimodular tau1"
                          : "iterates converge to (pi1, tau2) for some unimodular tau2";
        return hc;
    }
    hc.phi_class = classify_dw(F.phi, tau_hint, Side::Left, opt);
    hc.psi_class = classify_dw(F.psi, tau_hint, Side::Right, opt);
    const auto one = [](DWClass::Kind k) {
        return k == DWClass::Kind::TypeI_CPoint || k == DWClass::Kind::TypeI_NonC;
    };
    const auto two = [](DWClass::Kind k) { return k == DWClass::Kind::TypeII; };
    const DWClass::Kind pk = hc.phi_class.kind, qk = hc.psi_class.kind;
    if ((!one(pk) && !two(pk)) || (!one(qk) && !two(qk)))
        throw BoundaryError(BoundaryError::Kind::Unclassifiable,
                            std::string("herve_case: component classes ") + to_string(pk) +
                                " / " + to_string(qk));

    const bool phi_nonc = pk == DWClass::Kind::TypeI_NonC;
    const bool psi_nonc = qk == DWClass::Kind::TypeI_NonC;
    if (two(pk) && two(qk)) {
        hc.kind = HerveCase::Case::II_II;
        hc.expected = "iterates converge to (tau1, tau2) uniformly on compact subsets";
    } else if (one(pk) && two(qk)) {
        hc.kind = HerveCase::Case::I_II;
        hc.refined = phi_nonc;
        hc.expected = phi_nonc
                          ? "iterates converge to (tau1, tau2) uniformly on compact subsets"
                          : "every cluster point has the form (tau1, h)";
    } else if (two(pk) && one(qk)) {
        hc.kind = HerveCase::Case::II_I;
        hc.refined = psi_nonc;
        hc.expected = psi_nonc
                          ? "iterates converge to (tau1, tau2) uniformly on compact subsets"
                          : "every cluster point has the form (g, tau2)";
    } else {
        hc.kind = HerveCase::Case::I_I;
        hc.refined = phi_nonc || psi_nonc;
        hc.expected = phi_nonc ? "every cluster point has the form (tau1, h)"
                    : psi_nonc ? "every cluster point has the form (g, tau2)"
                               : "cluster points have the form (tau1, h) or (g, tau2)";
    }
    return hc;
}

struct ConvergenceReport {
    bool converged = false;
    std::optional<BoundaryPoint> limit;
    std::optional<std::size_t> n_at_tol;
    bool monotone_a = true;
    bool monotone_r = true;
};

inline ConvergenceReport convergence_report(const Orbit& orbit, double tol) {
    if (orbit.points.empty()) throw std::invalid_argument("convergence_report: empty orbit");
    ConvergenceReport rep;
    for (std::size_t i = 0; i < orbit.points.size(); ++i) {
        if (!rep.converged && sup_dist(orbit.points[i], orbit.tau.t1, orbit.tau.t2) <= tol) {
            rep.converged = true;
            rep.n_at_tol = i;
            rep.limit = orbit.tau;
        }
    }
    constexpr double slack = 1e-12;
    for (std::size_t i = 0; i + 1 < orbit.a_seq.size(); ++i) {
        if (orbit.a_seq[i + 1] > orbit.a_seq[i] + slack) rep.monotone_a = false;
        if (orbit.r_seq[i + 1] > orbit.r_seq[i] + slack) rep.monotone_r = false;
    }
    return rep;
}

}  // namespace bidisk
