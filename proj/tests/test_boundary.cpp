#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "bidisk/boundary.hpp"
#include "oracles.hpp"

using namespace bidisk;

namespace {
const BoundaryPoint kCorner = make_boundary_point({1, 0}, {1, 0});
ScalarMap builtin(const char* name) { return ScalarMap::builtin(std::string(name)); }
}  // namespace

TEST_CASE("radial quotient along rays") {
    const ScalarMap herve = builtin("herve_ex1_phi");
    for (double t : {0.4, 0.1, 0.01, 1e-4})
        CHECK(std::abs(radial_quotient(herve, kCorner, 1.0, t) - 0.5) < 1e-12);

    // exact linear map: quotient 1 at M = 2
    const ScalarMap avg = builtin("avg_shift_phi");
    CHECK(std::abs(radial_quotient(avg, kCorner, 2.0, 0.01) - 1.0) < 1e-13);

    // constant map: quotient diverges like (1 - |c|)/t, the non-B-point signal
    const ScalarMap c = ScalarMap::rational({{0.5}}, {{1}});
    CHECK(std::abs(radial_quotient(c, kCorner, 1.0, 0.001) - 500.0) < 1e-9);

    CHECK_THROWS_AS(radial_quotient(herve, kCorner, 4.0, 0.3), std::invalid_argument);
}

TEST_CASE("radial quotient converges to k_value at M = 1") {
    for (const char* name : {"herve_ex1_phi", "mcp_ex1_psi", "avg_shift_phi"}) {
        const ScalarMap m = builtin(name);
        const double k1 = k_value(m, kCorner, 1.0);
        const double q = radial_quotient(m, kCorner, 1.0, std::ldexp(1.0, -24));
        INFO(name);
        CHECK(std::abs(q - k1) < 1e-6);
    }
}

TEST_CASE("boundary values at the corner") {
    const auto bv1 = boundary_value(builtin("herve_ex1_phi"), kCorner);
    CHECK(std::abs(bv1.value - 1.0) < 1e-9);
    CHECK(bv1.is_fixed_first_coord);

    const auto bv2 = boundary_value(builtin("mcp_ex1_psi"), kCorner);
    CHECK(std::abs(bv2.value - 1.0) < 1e-9);
    CHECK(bv2.is_fixed_first_coord);

    const BoundaryPoint mixed = make_boundary_point({1, 0}, {-1, 0});
    const auto bv3 = boundary_value(builtin("herve_ex1_phi"), mixed);
    CHECK(std::abs(bv3.value - 1.0) < 1e-9);
    CHECK(bv3.is_fixed_first_coord);

    // constant map: limit exists but does not fix tau1
    const auto bv4 = boundary_value(ScalarMap::rational({{0.5}}, {{1}}), kCorner);
    CHECK(std::abs(bv4.value - 0.5) < 1e-12);
    CHECK_FALSE(bv4.is_fixed_first_coord);
}

TEST_CASE("k_value against the closed forms") {
    CHECK(std::abs(k_value(builtin("herve_ex1_phi"), kCorner, 1.0) - 0.5) < 1e-7);
    CHECK(std::abs(k_value(builtin("mcp_ex1_psi"), kCorner, 1.0) - 4.0) < 1e-7);
    CHECK(std::abs(k_value(builtin("avg_shift_phi"), kCorner, 2.0) - 1.0) < 1e-10);
    CHECK(std::abs(k_value(builtin("mcp_ex1_psi"), kCorner, 2.0) - 8.0 * std::log(2.0)) < 1e-7);
}

TEST_CASE("k_curve matches the closed forms on the example grids") {
    SECTION("Moebius example, M/(M+1)") {
        const KCurve c = k_curve(builtin("herve_ex1_phi"), kCorner, 0.1, 10.0, 25);
        REQUIRE(c.m_grid.size() == 25);
        CHECK(c.valid);
        CHECK(c.monotone);
        for (std::size_t i = 0; i < 25; ++i)
            CHECK(std::abs(c.k_values[i] - oracle::k_moebius(c.m_grid[i])) < 1e-6);
    }
    SECTION("exact linear map, (2+M)/4") {
        const KCurve c = k_curve(builtin("avg_shift_phi"), kCorner, 0.5, 8.0, 10);
        for (std::size_t i = 0; i < 10; ++i)
            CHECK(std::abs(c.k_values[i] - oracle::k_avg_shift(c.m_grid[i])) < 1e-9);
    }
    SECTION("log map, 4M ln M / (M-1)") {
        const KCurve c = k_curve(builtin("mcp_ex1_psi"), kCorner, 0.05, 4.0, 30);
        CHECK(c.valid);
        CHECK(c.monotone);
        for (std::size_t i = 0; i < 30; ++i)
            CHECK(std::abs(c.k_values[i] - oracle::k_log_map(c.m_grid[i])) < 1e-4);
    }
}

TEST_CASE("classification of the example maps at (1,1)") {
    SECTION("Moebius example: Type I, not a C-point, limit 1") {
        const DWClass c = classify_dw(builtin("herve_ex1_phi"), kCorner, Side::Left);
        REQUIRE(c.kind == DWClass::Kind::TypeI_NonC);
        CHECK(std::abs(c.k_limit - 1.0) < 1e-3);
    }
    SECTION("second Moebius example: Type I, not a C-point, limit 1") {
        const DWClass c = classify_dw(builtin("sola_ex2_phi"), kCorner, Side::Left);
        REQUIRE(c.kind == DWClass::Kind::TypeI_NonC);
        CHECK(std::abs(c.k_limit - 1.0) < 1e-3);
    }
    SECTION("log map: Type II with the closed-form root") {
        const DWClass c = classify_dw(builtin("mcp_ex1_psi"), kCorner, Side::Left);
        REQUIRE(c.kind == DWClass::Kind::TypeII);
        CHECK(std::abs(c.constant_a - oracle::log_map_constant_a()) < 1e-3);
    }
    SECTION("avg_shift: Type II with A = 2 exactly") {
        const DWClass c = classify_dw(builtin("avg_shift_phi"), kCorner, Side::Left);
        REQUIRE(c.kind == DWClass::Kind::TypeII);
        CHECK(std::abs(c.constant_a - 2.0) < 1e-6);
    }
    SECTION("right classification via the swapped map") {
        const DWClass c = classify_dw(builtin("avg_shift_psi"), kCorner, Side::Right);
        REQUIRE(c.kind == DWClass::Kind::TypeII);
        CHECK(std::abs(c.constant_a - 2.0) < 1e-6);
    }
    SECTION("non-fixed point") {
        const BoundaryPoint off = make_boundary_point({-1, 0}, {1, 0});
        const DWClass c = classify_dw(builtin("avg_shift_phi"), off, Side::Left);
        CHECK(c.kind == DWClass::Kind::NotFixed);
    }
}

TEST_CASE("find_constant_a on the example curves") {
    const KCurve mcp = k_curve(builtin("mcp_ex1_psi"), kCorner, 0.01, 4.0, 30);
    CHECK(std::abs(find_constant_a(builtin("mcp_ex1_psi"), mcp) -
                   oracle::log_map_constant_a()) < 1e-3);

    const KCurve avg = k_curve(builtin("avg_shift_phi"), kCorner, 0.25, 16.0, 20);
    CHECK(std::abs(find_constant_a(builtin("avg_shift_phi"), avg) - 2.0) < 1e-6);

    const KCurve herve = k_curve(builtin("herve_ex1_phi"), kCorner, 0.1, 10.0, 25);
    CHECK_THROWS_AS(find_constant_a(builtin("herve_ex1_phi"), herve), BoundaryError);

    // entirely above 1 is just as rootless
    const KCurve high = k_curve(builtin("avg_shift_phi"), kCorner, 4.0, 16.0, 8);
    CHECK_THROWS_AS(find_constant_a(builtin("avg_shift_phi"), high), BoundaryError);
}

TEST_CASE("slice Denjoy-Wolff points") {
    SECTION("parabolic slice of sola_ex2_phi") {
        const SliceDW s = slice_denjoy_wolff(builtin("sola_ex2_phi"), Side::Left, 0.0);
        REQUIRE(s.kind == SliceDW::Kind::BoundaryDW);
        CHECK(std::abs(s.tau - 1.0) < 1e-6);
        CHECK(std::abs(s.alpha - 1.0) < 1e-6);  // slice derivative 4/(3-z)^2 at z=1
    }
    SECTION("interior fixed slice of avg_shift") {
        const SliceDW s = slice_denjoy_wolff(builtin("avg_shift_phi"), Side::Left, 0.0);
        REQUIRE(s.kind == SliceDW::Kind::InteriorFixed);
        CHECK(std::abs(s.fixed_point.z - 0.5) < 1e-10);
        CHECK(std::abs(s.multiplier - 0.5) < 1e-6);
    }
    SECTION("parabolic slice of the Moebius example") {
        const SliceDW s = slice_denjoy_wolff(builtin("herve_ex1_phi"), Side::Left, 0.0);
        REQUIRE(s.kind == SliceDW::Kind::BoundaryDW);
        CHECK(std::abs(s.tau - 1.0) < 1e-6);
        CHECK(std::abs(s.alpha - 1.0) < 1e-6);
    }
    SECTION("identity slice is rejected") {
        // phi(z1, z2) = z1 has identity slices
        const ScalarMap proj = ScalarMap::rational({{0, 0}, {1, 0}}, {{1}});
        CHECK_THROWS_AS(slice_denjoy_wolff(proj, Side::Left, 0.0), BoundaryError);
    }
}

TEST_CASE("slice fixed points (the map xi)") {
    // xi(mu) = (1+mu)/2 for avg_shift_phi
    CHECK(std::abs(slice_fixed_point(builtin("avg_shift_phi"), Side::Left, 0.0).z - 0.5) < 1e-10);
    CHECK(std::abs(slice_fixed_point(builtin("avg_shift_phi"), Side::Left, 0.2).z - 0.6) < 1e-10);
    CHECK_THROWS_AS(slice_fixed_point(builtin("herve_ex1_phi"), Side::Left, 0.0), BoundaryError);
}

TEST_CASE("Newton fallback resolves an elliptic automorphism slice") {
    // phi(z1, z2) = i (z1 - 0.3)/(1 - 0.3 z1): every slice is an elliptic
    // rotation, so Picard from 0 cycles without converging
    const ScalarMap m = ScalarMap::rational({{Complex{0, -0.3}}, {Complex{0, 1}}},
                                            {{1}, {-0.3}});
    const DiskPoint p = slice_fixed_point(m, Side::Left, 0.0);
    CHECK(std::abs(p.z - Complex{0.15743581031043047, -0.15743581031043064}) < 1e-9);
    CHECK(std::abs(m(p.z, 0.0) - p.z) <= 1e-10);
}

TEST_CASE("a_from_xi agrees with the K-curve constant") {
    CHECK(std::abs(a_from_xi(builtin("avg_shift_phi"), kCorner, Side::Left) - 2.0) < 1e-9);
    const double a_xi = a_from_xi(builtin("mcp_ex1_psi"), kCorner, Side::Left);
    CHECK(std::abs(a_xi - oracle::log_map_constant_a()) < 1e-3);
    CHECK_THROWS_AS(a_from_xi(builtin("herve_ex1_phi"), kCorner, Side::Left), BoundaryError);
}

TEST_CASE("K curves are monotone for builtins and random blends") {
    for (const char* name :
         {"herve_ex1_phi", "mcp_ex1_psi", "sola_ex2_phi", "avg_shift_phi", "avg_shift_psi"}) {
        INFO(name);
        CHECK(k_curve(builtin(name), kCorner, 0.02, 50.0, 30).monotone);
    }
    std::mt19937_64 rng(0xB1E0D);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double s = 0.3 + 0.7 * unif(rng);
        const double w1 = unif(rng);
        const ScalarMap m = ScalarMap::blend(s, w1, 1.0 - w1, Complex{0.9 * unif(rng), 0.0});
        const KCurve c = k_curve(m, kCorner, 0.02, 50.0, 30);
        CHECK(c.valid);
        CHECK(c.monotone);
    }
}

TEST_CASE("exactness on the linear map over a wide grid") {
    const ScalarMap avg = builtin("avg_shift_phi");
    for (const double M : log_grid(0.25, 16.0, 20))
        CHECK(std::abs(k_value(avg, kCorner, M) - oracle::k_avg_shift(M)) <= 1e-9);
}

TEST_CASE("limit law: k_limit equals the slice angular derivative") {
    for (const char* name : {"herve_ex1_phi", "sola_ex2_phi"}) {
        INFO(name);
        const ScalarMap m = builtin(name);
        const DWClass c = classify_dw(m, kCorner, Side::Left);
        REQUIRE(c.kind == DWClass::Kind::TypeI_NonC);
        const SliceDW s = slice_denjoy_wolff(m, Side::Left, 0.0);
        REQUIRE(s.kind == SliceDW::Kind::BoundaryDW);
        CHECK(std::abs(c.k_limit - s.alpha) < 1e-3);
    }
}

TEST_CASE("facial classification delegates to the slice") {
    // (1, sigma) with |sigma| < 1: slices of avg_shift_phi have interior
    // fixed points, so the facial point is fixed by no slice DW point.
    const BoundaryPoint facial = make_boundary_point({1, 0}, {0.25, 0});
    const DWClass avg = classify_dw(builtin("avg_shift_phi"), facial, Side::Left);
    CHECK(avg.kind == DWClass::Kind::NotFixed);

    // herve's slices all have DW point 1 with derivative 1: facial C-points.
    const DWClass herve = classify_dw(builtin("herve_ex1_phi"), facial, Side::Left);
    REQUIRE(herve.kind == DWClass::Kind::TypeI_CPoint);
    CHECK(std::abs(herve.alpha - 1.0) < 1e-6);
}

TEST_CASE("fixed boundary point with K above 1 throughout is Neither") {
    // phi(z1, z2) = z1 (1 + z2) / 2 fixes (1,1) with K(M) = 1 + M/2 > 1
    const ScalarMap m = ScalarMap::rational({{0, 0}, {0.5, 0.5}}, {{1}});
    CHECK(std::abs(m(1.0 - 1e-3, 1.0 - 1e-3) - Complex{0.99850, 0}) < 1e-4);
    const DWClass c = classify_dw(m, kCorner, Side::Left);
    REQUIRE(c.kind == DWClass::Kind::Neither);
    CHECK(c.k_min > 1.0);
    CHECK(c.k_min < 1.01);
}

TEST_CASE("classification away from the main corner") {
    // (1, -1): the Moebius example extends analytically, K is constant 1
    const BoundaryPoint mixed = make_boundary_point({1, 0}, {-1, 0});
    const DWClass c = classify_dw(builtin("herve_ex1_phi"), mixed, Side::Left);
    REQUIRE(c.kind == DWClass::Kind::TypeI_CPoint);
    CHECK(std::abs(c.alpha - 1.0) < 1e-6);

    // (i, 1) is not fixed by the map
    const BoundaryPoint rotated = make_boundary_point({0, 1}, {1, 0});
    CHECK(classify_dw(builtin("herve_ex1_phi"), rotated, Side::Left).kind ==
          DWClass::Kind::NotFixed);
}

TEST_CASE("repelling facial fixed point is Neither") {
    // phi(z1, z2) = z1^2 fixes (1, 0) but the slice Denjoy-Wolff point is 0
    const ScalarMap sq = ScalarMap::rational({{0}, {0}, {1}}, {{1}});
    const BoundaryPoint facial = make_boundary_point({1, 0}, {0, 0});
    const DWClass c = classify_dw(sq, facial, Side::Left);
    REQUIRE(c.kind == DWClass::Kind::Neither);
    CHECK(std::abs(c.k_min - 2.0) < 1e-7);  // the facial K is the radial derivative
}

TEST_CASE("k_sample reports the imaginary residual") {
    const KSample s = k_sample(builtin("herve_ex1_phi"), kCorner, 3.0);
    CHECK(std::abs(s.imag_residual) < 1e-10);
    CHECK(s.err < 1e-6);
}
