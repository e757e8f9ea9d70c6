#include <catch2/catch_amalgamated.hpp>

#include "bidisk/julia.hpp"
#include "oracles.hpp"

using namespace bidisk;

namespace {
const BoundaryPoint kCorner = make_boundary_point({1, 0}, {1, 0});
ScalarMap builtin(const char* name) { return ScalarMap::builtin(std::string(name)); }
SelfMap2 ex1() { return {builtin("herve_ex1_phi"), builtin("mcp_ex1_psi")}; }
SelfMap2 avg() { return {builtin("avg_shift_phi"), builtin("avg_shift_psi")}; }
}  // namespace

TEST_CASE("weighted Julia inequality holds at alpha slightly above K") {
    SECTION("Moebius example at M = 1, alpha = K + 1e-6") {
        const auto rep = julia_max_violation(builtin("herve_ex1_phi"), kCorner, 1.0,
                                             0.5 + 1e-6, 100000);
        CHECK(rep.max_violation <= 1e-9);
        CHECK(rep.tightness <= 1.0 + 1e-6);
    }
    SECTION("linear map at M = 2, alpha = 1 + 1e-6") {
        const auto rep = julia_max_violation(builtin("avg_shift_phi"), kCorner, 2.0,
                                             1.0 + 1e-6, 100000);
        CHECK(rep.max_violation <= 1e-9);
    }
    SECTION("log map at M = 1, alpha = 4 + 1e-6") {
        const auto rep = julia_max_violation(builtin("mcp_ex1_psi"), kCorner, 1.0,
                                             4.0 + 1e-6, 100000);
        CHECK(rep.max_violation <= 1e-9);
    }
}

TEST_CASE("alpha below K produces a sampled violation") {
    const auto rep = julia_max_violation(builtin("herve_ex1_phi"), kCorner, 1.0, 0.4, 100000);
    CHECK(rep.max_violation > 0.0);
    // the worst point is a genuine witness
    const Complex w = builtin("herve_ex1_phi")(rep.worst_point);
    const HorosphereRadii r = horosphere_radii(kCorner, rep.worst_point);
    const double lhs = std::norm(1.0 - w) / (1.0 - std::norm(w));
    CHECK(lhs > 0.4 * std::max(r.a, r.b));
}

TEST_CASE("max_violation is non-increasing in alpha") {
    const ScalarMap m = builtin("herve_ex1_phi");
    double prev = std::numeric_limits<double>::infinity();
    for (double alpha : {0.3, 0.4, 0.5, 0.7}) {
        const double v = julia_max_violation(m, kCorner, 1.0, alpha, 5000).max_violation;
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("julia_tightness recovers K along the ray") {
    CHECK(std::abs(julia_tightness(builtin("herve_ex1_phi"), kCorner, 1.0) - 0.5) < 1e-4);
    CHECK(std::abs(julia_tightness(builtin("avg_shift_phi"), kCorner, 2.0) - 1.0) < 1e-4);
    const double a = oracle::log_map_constant_a();
    CHECK(std::abs(julia_tightness(builtin("mcp_ex1_psi"), kCorner, a) - 1.0) < 1e-4);
    // against the computed k_value on a few weights
    for (double M : {0.5, 1.0, 2.0}) {
        for (const char* name : {"herve_ex1_phi", "mcp_ex1_psi", "sola_ex2_phi", "avg_shift_phi"}) {
            INFO(name << " M=" << M);
            CHECK(std::abs(julia_tightness(builtin(name), kCorner, M) -
                           k_value(builtin(name), kCorner, M)) < 1e-4);
        }
    }
}

TEST_CASE("horosphere invariance") {
    SECTION("avg_shift with K = 1") {
        CHECK(horosphere_invariance_violation(avg(), kCorner, 1.0, 10000) <= 1e-9);
    }
    SECTION("avg_shift at the admissible band edges") {
        CHECK(horosphere_invariance_violation(avg(), kCorner, 0.5, 10000) <= 1e-9);
        CHECK(horosphere_invariance_violation(avg(), kCorner, 2.0, 10000) <= 1e-9);
    }
    SECTION("K far outside the band breaks invariance") {
        CHECK(horosphere_invariance_violation(avg(), kCorner, 100.0, 10000) > 0.0);
    }
    SECTION("ex1 pair with K = 1/A_psi") {
        const double k = 1.0 / oracle::log_map_constant_a();
        CHECK(horosphere_invariance_violation(ex1(), kCorner, k, 10000) <= 1e-9);
    }
}

TEST_CASE("wolff set structure of the example pairs") {
    SECTION("avg_shift: single corner point") {
        const WolffSetReport rep = wolff_set_structure(avg(), kCorner);
        CHECK(rep.kind == WolffSetReport::Case::II_II_point);
        CHECK(rep.phi_class.kind == DWClass::Kind::TypeII);
        CHECK(rep.psi_class.kind == DWClass::Kind::TypeII);
        CHECK(std::isnan(rep.facial_check_phi));
    }
    SECTION("ex1 pair: face plus corner") {
        const WolffSetReport rep = wolff_set_structure(ex1(), kCorner);
        CHECK(rep.kind == WolffSetReport::Case::I_II_face);
        CHECK(rep.phi_class.kind == DWClass::Kind::TypeI_NonC);
        CHECK(rep.psi_class.kind == DWClass::Kind::TypeII);
        CHECK(rep.facial_check_phi <= 1e-9);  // left Type I horocycle contraction
    }
    SECTION("sola_ex2_phi with its swap: full cross") {
        const SelfMap2 F{builtin("sola_ex2_phi"), swap_args(builtin("sola_ex2_phi"))};
        const WolffSetReport rep = wolff_set_structure(F, kCorner);
        CHECK(rep.kind == WolffSetReport::Case::I_I_cross);
        CHECK(rep.facial_check_phi <= 1e-9);
        CHECK(rep.facial_check_psi <= 1e-9);
    }
    SECTION("unclassifiable component") {
        const SelfMap2 F{ScalarMap::rational({{0.5}}, {{1}}), builtin("avg_shift_psi")};
        CHECK_THROWS_AS(wolff_set_structure(F, kCorner), BoundaryError);
    }
}
