#pragma once

// Sampled verification of the weighted Julia inequality
//
//   |phi(tau) - phi(lambda)|^2 / (1 - |phi(lambda)|^2)
//        <= max{ alpha R_1, alpha R_2 / M },
//
// with R_j the coordinate horocycle quotients, horosphere invariance for
// self-maps F(E(tau, R, KR)) in E(tau, R, KR), and the structure scan of the
// generalized Wolff set W(F).

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "bidisk/boundary.hpp"
#include "bidisk/geometry.hpp"
#include "bidisk/maps.hpp"
#include "bidisk/sampling.hpp"

namespace bidisk {

struct JuliaReport {
    std::size_t n_samples;
    double max_violation;  // sampled max of LHS - RHS; <= 0 means satisfied
    double tightness;      // sampled max of LHS / RHS
    BidiskPoint worst_point;
};

inline JuliaReport julia_max_violation(const ScalarMap& m, const BoundaryPoint& tau, double M,
                                       double alpha, std::size_t n,
                                       std::uint64_t seed = kDefaultSeed) {
    const Complex omega = boundary_value(m, tau).value;
    const BidiskSampler sampler(seed);
    JuliaReport rep{n, -std::numeric_limits<double>::infinity(), 0.0, {}};
    for (std::size_t i = 0; i < n; ++i) {
        const BidiskPoint z = sampler(i);
        const HorosphereRadii r = horosphere_radii(tau, z);
        const Complex w = m(z);
        const double lhs = std::norm(omega - w) / (1.0 - std::norm(w));
        const double rhs = alpha * std::max(r.a, r.b / M);
        if (lhs - rhs > rep.max_violation) {
            rep.max_violation = lhs - rhs;
            rep.worst_point = z;
        }
        if (rhs > 0.0) rep.tightness = std::max(rep.tightness, lhs / rhs);
    }
    return rep;
}

// Sup along the ray lambda_t = tau - t(tau1, tau2 M), t = 2^-k, of
// LHS / max{R_1, R_2/M}.  By the weighted Julia inequality the ratio is
// bounded by K_tau(M) and tends to it, so the sup recovers K_tau(M).
inline double julia_tightness(const ScalarMap& m, const BoundaryPoint& tau, double M) {
    const Complex omega = boundary_value(m, tau).value;
    int k_lo = 2;
    while (std::ldexp(1.0, -k_lo) * M >= 0.5) ++k_lo;
    double sup = -std::numeric_limits<double>::infinity();
    for (int k = k_lo; k <= 33; ++k) {
        const double t = std::ldexp(1.0, -k);
        const Complex z1 = tau.t1 * (1.0 - t);
        const Complex z2 = tau.t2 * (1.0 - t * M);
        const Complex w = m(z1, z2);
        const double lhs = std::norm(omega - w) / (1.0 - std::norm(w));
        // exact ray quotients: R1 = t/(2-t), R2/M = t/(2-tM)
        const double rhs = std::max(t / (2.0 - t), t / (2.0 - t * M));
        sup = std::max(sup, lhs / rhs);
    }
    if (!std::isfinite(sup))
        throw BoundaryError(BoundaryError::Kind::NoLimit, "julia_tightness: ray ratio diverged");
    return sup;
}

// Max over samples of max{A(F(z)) - R, B(F(z)) - K R} with
// R = max{A(z), B(z)/K} the radius of the smallest member of the family
// {E(tau, R, KR)} containing z; <= 0 on all samples means every member of
// the family is invariant where probed.
inline double horosphere_invariance_violation(const SelfMap2& F, const BoundaryPoint& tau,
                                              double K, std::size_t n,
                                              std::uint64_t seed = kDefaultSeed) {
    if (!(K > 0.0)) throw std::invalid_argument("horosphere_invariance: K must be positive");
    const BidiskSampler sampler(seed);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const BidiskPoint z = sampler(i);
        const HorosphereRadii before = horosphere_radii(tau, z);
        const double radius = std::max(before.a, before.b / K);
        const HorosphereRadii after = horosphere_radii(tau, F(z));
        worst = std::max(worst, std::max(after.a - radius, after.b - K * radius));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Generalized Wolff set structure.
// ---------------------------------------------------------------------------

struct WolffSetReport {
    enum class Case { II_II_point, I_II_face, II_I_face, I_I_cross };
    Case kind;
    DWClass phi_class;  // left classification of phi at the witness
    DWClass psi_class;  // right classification of psi at the witness
    BoundaryPoint witness_tau;
    // Sampled invariance spot checks at one facial point per Type I side
    // (first-coordinate horocycle contraction for phi, second for psi);
    // NaN when the side is not Type I.
    double facial_check_phi = std::numeric_limits<double>::quiet_NaN();
    double facial_check_psi = std::numeric_limits<double>::quiet_NaN();
};

inline const char* to_string(WolffSetReport::Case c) {
    switch (c) {
        case WolffSetReport::Case::II_II_point: return "II_II_point";
        case WolffSetReport::Case::I_II_face: return "I_II_face";
        case WolffSetReport::Case::II_I_face: return "II_I_face";
        case WolffSetReport::Case::I_I_cross: return "I_I_cross";
    }
    return "?";
}

namespace detail {

inline bool is_type_one(DWClass::Kind k) {
    return k == DWClass::Kind::TypeI_CPoint || k == DWClass::Kind::TypeI_NonC;
}

// Horocycle contraction of a scalar map at a facial boundary point
// (tau1, 0): max over samples of A(m(z)) - A(z) for the coordinate quotient.
inline double facial_contraction_check(const ScalarMap& m, const Complex& tau1, std::size_t n,
                                       std::uint64_t seed) {
    const BidiskSampler sampler(seed);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const BidiskPoint z = sampler(i);
        const double before = horocycle_quotient(tau1, z.z1);
        const double after = horocycle_quotient(tau1, m(z));
        worst = std::max(worst, after - before);
    }
    return worst;
}

}  // namespace detail

inline WolffSetReport wolff_set_structure(const SelfMap2& F, const BoundaryPoint& tau_hint,
                                          const ClassifyOptions& opt = {},
                                          std::uint64_t seed = kDefaultSeed) {
    WolffSetReport rep{};
    rep.witness_tau = tau_hint;
    rep.phi_class = classify_dw(F.phi, tau_hint, Side::Left, opt);
    rep.psi_class = classify_dw(F.psi, tau_hint, Side::Right, opt);

    const bool phi_I = detail::is_type_one(rep.phi_class.kind);
    const bool phi_II = rep.phi_class.kind == DWClass::Kind::TypeII;
    const bool psi_I = detail::is_type_one(rep.psi_class.kind);
    const bool psi_II = rep.psi_class.kind == DWClass::Kind::TypeII;
    if ((!phi_I && !phi_II) || (!psi_I && !psi_II))
        throw BoundaryError(BoundaryError::Kind::Unclassifiable,
                            std::string("wolff_set_structure: component classes ") +
                                to_string(rep.phi_class.kind) + " / " +
                                to_string(rep.psi_class.kind));

    constexpr std::size_t kSpotSamples = 1000;
    if (phi_I)
        rep.facial_check_phi =
            detail::facial_contraction_check(F.phi, tau_hint.t1, kSpotSamples, seed);
    if (psi_I) {
        // right Type I: second coordinate horocycle contracts under psi
        const ScalarMap swapped = swap_args(F.psi);
        rep.facial_check_psi =
            detail::facial_contraction_check(swapped, tau_hint.t2, kSpotSamples, seed);
    }

    rep.kind = phi_II ? (psi_II ? WolffSetReport::Case::II_II_point
                                : WolffSetReport::Case::II_I_face)
                      : (psi_II ? WolffSetReport::Case::I_II_face
                                : WolffSetReport::Case::I_I_cross);
    return rep;
}

}  // namespace bidisk
