#pragma once

// Horocycle and horosphere geometry of the unit disk and the bidisk.
//
// A horocycle E(tau, R) is the sublevel set |z - tau|^2 / (1 - |z|^2) < R,
// a Euclidean disk internally tangent to the unit circle at tau.  A
// horosphere on the bidisk is a product of two horocycles.  All sets here
// are open; membership uses strict inequality.

#include <cmath>
#include <complex>
#include <stdexcept>

namespace bidisk {

using Complex = std::complex<double>;

// Tolerance for deciding that a boundary coordinate is unimodular.
inline constexpr double kUnimodularTol = 1e-12;

struct DiskPoint {
    Complex z;
};

struct BidiskPoint {
    Complex z1;
    Complex z2;
};

// A point of the topological boundary of the bidisk.  At least one
// coordinate is unimodular; the flags record which.
struct BoundaryPoint {
    Complex t1;
    Complex t2;
    bool on_circle1 = false;
    bool on_circle2 = false;

    bool distinguished() const { return on_circle1 && on_circle2; }
};

inline bool is_unimodular(const Complex& t) {
    return std::abs(std::abs(t) - 1.0) <= kUnimodularTol;
}

// Builds a boundary point, inferring the unimodularity flags from the
// coordinate moduli.  Throws if no coordinate is unimodular or if a
// coordinate lies outside the closed disk.
inline BoundaryPoint make_boundary_point(const Complex& t1, const Complex& t2) {
    BoundaryPoint tau{t1, t2, is_unimodular(t1), is_unimodular(t2)};
    if (!tau.on_circle1 && !tau.on_circle2)
        throw std::invalid_argument("boundary point: no unimodular coordinate");
    if ((!tau.on_circle1 && std::abs(t1) >= 1.0) || (!tau.on_circle2 && std::abs(t2) >= 1.0))
        throw std::invalid_argument("boundary point: coordinate outside closed bidisk");
    return tau;
}

struct Horocycle {
    Complex tau;    // unimodular center of tangency
    double radius;  // R > 0
};

struct Horosphere {
    BoundaryPoint tau;  // both flags set
    double r1;
    double r2;
};

// |z - tau|^2 / (1 - |z|^2), the quantity horocycles are sublevel sets of.
inline double horocycle_quotient(const Complex& tau, const Complex& z) {
    return std::norm(tau - z) / (1.0 - std::norm(z));
}

inline bool horocycle_contains(const Horocycle& h, const DiskPoint& z) {
    return horocycle_quotient(h.tau, z.z) < h.radius;
}

struct EuclideanDisk {
    Complex center;
    double radius;

    bool contains(const Complex& z) const { return std::abs(z - center) < radius; }
};

// E(tau, R) = D(tau/(R+1), R/(R+1)).
inline EuclideanDisk horocycle_disk_form(const Horocycle& h) {
    return {h.tau / (h.radius + 1.0), h.radius / (h.radius + 1.0)};
}

struct HorosphereRadii {
    double a;  // first-coordinate quotient
    double b;  // second-coordinate quotient
};

// Coordinatewise horocycle quotients of z with respect to tau; these are the
// orbit quantities A_n, B_n of the iteration telemetry.
inline HorosphereRadii horosphere_radii(const BoundaryPoint& tau, const BidiskPoint& z) {
    return {horocycle_quotient(tau.t1, z.z1), horocycle_quotient(tau.t2, z.z2)};
}

inline bool horosphere_contains(const Horosphere& s, const BidiskPoint& z) {
    const HorosphereRadii r = horosphere_radii(s.tau, z);
    return r.a < s.r1 && r.b < s.r2;
}

inline double sup_norm(const BidiskPoint& z) {
    return std::max(std::abs(z.z1), std::abs(z.z2));
}

inline double sup_dist(const BidiskPoint& z, const Complex& w1, const Complex& w2) {
    return std::max(std::abs(z.z1 - w1), std::abs(z.z2 - w2));
}

}  // namespace bidisk
