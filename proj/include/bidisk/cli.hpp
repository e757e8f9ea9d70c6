#pragma once

// Command-line front end.  Verbs map one-to-one onto library operations:
//
//   eval        evaluate a scalar map at a bidisk point
//   kcurve      sample K_tau(M) over a log grid, CSV output
//   classify    Denjoy-Wolff classification of a fixed boundary point
//   slice-dw    Denjoy-Wolff point of a slice function
//   julia-check sampled weighted Julia inequality report
//   invariance  sampled horosphere invariance violation
//   iterate     orbit with horosphere telemetry, CSV output
//   find-dw     scaled fixed-point continuation toward the Denjoy-Wolff point
//   wolff-set   generalized Wolff set structure scan
//   herve-case  case report for the iterate sequence
//
// Exit codes: 0 success, 1 evaluation error, 2 ambiguous/unclassifiable,
// 64 usage error.  Sampling defaults to the fixed seed; DW_SEED or --seed
// override it.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bidisk/dynamics.hpp"
#include "bidisk/io.hpp"
#include "bidisk/julia.hpp"

namespace bidisk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitAmbiguous = 2;
inline constexpr int kExitUsage = 64;

namespace detail {

// "builtin:NAME" or a path to a map-spec JSON document.
inline ScalarMap resolve_map(const std::string& source) {
    constexpr const char* prefix = "builtin:";
    if (source.rfind(prefix, 0) == 0) return ScalarMap::builtin(source.substr(8));
    std::ifstream in(source);
    if (!in) throw MapError(MapError::Kind::ParseError, "cannot open map spec: " + source);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_map_string(buf.str());
}

inline Side resolve_side(const std::string& s) {
    if (s == "left") return Side::Left;
    if (s == "right") return Side::Right;
    throw std::invalid_argument("side must be left or right");
}

inline std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("DW_SEED")) return std::stoull(env, nullptr, 0);
    return kDefaultSeed;
}

inline void emit(const std::string& text, const std::string& out_path, std::ostream& fallback) {
    if (out_path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot open output file: " + out_path);
    f << text;
}

}  // namespace detail

inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Denjoy-Wolff analysis of holomorphic self-maps of the bidisk"};
    app.require_subcommand(1);

    std::string map_src, phi_src, psi_src, tau_str, side_str = "left", out_path;
    std::string z_str, fixed_str = "0,0", start_str = "0,0;0,0";
    double m_weight = 1.0, alpha = 1.0, k_const = 1.0, m_min = 0.1, m_max = 10.0;
    std::size_t samples = 100000, orbit_n = 100;
    int grid_n = 25, k_max = 20;
    std::optional<std::uint64_t> seed;

    auto add_seed = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "sampling seed (overrides DW_SEED)");
    };

    CLI::App* c_eval = app.add_subcommand("eval", "evaluate a map at a point");
    c_eval->add_option("--map", map_src, "builtin:NAME or map-spec path")->required();
    c_eval->add_option("--z", z_str, "point \"re,im;re,im\"")->required();

    CLI::App* c_kcurve = app.add_subcommand("kcurve", "sample the K curve");
    c_kcurve->add_option("--map", map_src)->required();
    c_kcurve->add_option("--tau", tau_str, "boundary point \"re,im;re,im\"")->required();
    c_kcurve->add_option("--mmin", m_min);
    c_kcurve->add_option("--mmax", m_max);
    c_kcurve->add_option("--n", grid_n);
    c_kcurve->add_option("--out", out_path, "CSV output path");

    CLI::App* c_classify = app.add_subcommand("classify", "classify a boundary fixed point");
    c_classify->add_option("--map", map_src)->required();
    c_classify->add_option("--tau", tau_str)->required();
    c_classify->add_option("--side", side_str)->check(CLI::IsMember({"left", "right"}));
    c_classify->add_option("--out", out_path);

    CLI::App* c_slice = app.add_subcommand("slice-dw", "Denjoy-Wolff point of a slice");
    c_slice->add_option("--map", map_src)->required();
    c_slice->add_option("--side", side_str)->check(CLI::IsMember({"left", "right"}));
    c_slice->add_option("--fixed", fixed_str, "frozen coordinate \"re,im\"");
    c_slice->add_option("--out", out_path);

    CLI::App* c_julia = app.add_subcommand("julia-check", "sampled weighted Julia inequality");
    c_julia->add_option("--map", map_src)->required();
    c_julia->add_option("--tau", tau_str)->required();
    c_julia->add_option("--M", m_weight);
    c_julia->add_option("--alpha", alpha)->required();
    c_julia->add_option("--samples", samples);
    c_julia->add_option("--out", out_path);
    add_seed(c_julia);

    CLI::App* c_inv = app.add_subcommand("invariance", "sampled horosphere invariance");
    c_inv->add_option("--phi", phi_src)->required();
    c_inv->add_option("--psi", psi_src)->required();
    c_inv->add_option("--tau", tau_str)->required();
    c_inv->add_option("--K", k_const);
    c_inv->add_option("--samples", samples);
    c_inv->add_option("--out", out_path);
    add_seed(c_inv);

    CLI::App* c_iter = app.add_subcommand("iterate", "orbit with horosphere telemetry");
    c_iter->add_option("--phi", phi_src)->required();
    c_iter->add_option("--psi", psi_src)->required();
    c_iter->add_option("--start", start_str, "initial point \"re,im;re,im\"");
    c_iter->add_option("--n", orbit_n);
    c_iter->add_option("--tau", tau_str)->required();
    c_iter->add_option("--K", k_const);
    c_iter->add_option("--out", out_path, "CSV output path");

    CLI::App* c_find = app.add_subcommand("find-dw", "fixed-point continuation");
    c_find->add_option("--phi", phi_src)->required();
    c_find->add_option("--psi", psi_src)->required();
    c_find->add_option("--kmax", k_max);
    c_find->add_option("--out", out_path, "CSV output path for the stages");

    CLI::App* c_wolff = app.add_subcommand("wolff-set", "generalized Wolff set structure");
    c_wolff->add_option("--phi", phi_src)->required();
    c_wolff->add_option("--psi", psi_src)->required();
    c_wolff->add_option("--tau", tau_str, "hint boundary point")->required();
    c_wolff->add_option("--out", out_path);
    add_seed(c_wolff);

    CLI::App* c_herve = app.add_subcommand("herve-case", "iterate-sequence case report");
    c_herve->add_option("--phi", phi_src)->required();
    c_herve->add_option("--psi", psi_src)->required();
    c_herve->add_option("--tau", tau_str)->required();
    c_herve->add_option("--out", out_path);

    std::vector<std::string> args(argv.rbegin(), argv.rend());  // CLI11 takes reversed args
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(c_eval)) {
            const ScalarMap m = detail::resolve_map(map_src);
            out << format_complex(m(parse_bidisk(z_str))) << "\n";
            return kExitOk;
        }
        if (app.got_subcommand(c_kcurve)) {
            const ScalarMap m = detail::resolve_map(map_src);
            const KCurve curve = k_curve(m, parse_boundary(tau_str), m_min, m_max, grid_n);
            std::ostringstream csv;
            write_csv(csv, curve);
            detail::emit(csv.str(), out_path, out);
            if (!curve.monotone) err << "warning: K curve not monotone within slack\n";
            if (!curve.valid) err << "warning: imaginary residual above 1e-6\n";
            return kExitOk;
        }
        if (app.got_subcommand(c_classify)) {
            const ScalarMap m = detail::resolve_map(map_src);
            const DWClass cls =
                classify_dw(m, parse_boundary(tau_str), detail::resolve_side(side_str));
            detail::emit(to_record(cls).str(), out_path, out);
            return cls.kind == DWClass::Kind::Ambiguous ? kExitAmbiguous : kExitOk;
        }
        if (app.got_subcommand(c_slice)) {
            const ScalarMap m = detail::resolve_map(map_src);
            const SliceDW s =
                slice_denjoy_wolff(m, detail::resolve_side(side_str), parse_complex(fixed_str));
            Record r;
            if (s.kind == SliceDW::Kind::InteriorFixed) {
                r.add("kind", "InteriorFixed");
                r.add("fixed_point", format_complex(s.fixed_point.z));
                r.add("multiplier", format_complex(s.multiplier));
            } else {
                r.add("kind", "BoundaryDW");
                r.add("tau", format_complex(s.tau));
                r.add("alpha", s.alpha);
            }
            detail::emit(r.str(), out_path, out);
            return kExitOk;
        }
        if (app.got_subcommand(c_julia)) {
            const ScalarMap m = detail::resolve_map(map_src);
            const JuliaReport rep = julia_max_violation(m, parse_boundary(tau_str), m_weight,
                                                        alpha, samples, detail::resolve_seed(seed));
            Record r;
            r.add("n_samples", rep.n_samples);
            r.add("max_violation", rep.max_violation);
            r.add("tightness", rep.tightness);
            r.add("worst_point", format_bidisk(rep.worst_point));
            detail::emit(r.str(), out_path, out);
            return kExitOk;
        }
        if (app.got_subcommand(c_inv)) {
            const SelfMap2 F{detail::resolve_map(phi_src), detail::resolve_map(psi_src)};
            const double v = horosphere_invariance_violation(
                F, parse_boundary(tau_str), k_const, samples, detail::resolve_seed(seed));
            Record r;
            r.add("max_violation", v);
            detail::emit(r.str(), out_path, out);
            return kExitOk;
        }
        if (app.got_subcommand(c_iter)) {
            const SelfMap2 F{detail::resolve_map(phi_src), detail::resolve_map(psi_src)};
            const Orbit orbit = iterate_orbit(F, parse_bidisk(start_str), orbit_n,
                                              parse_boundary(tau_str), k_const);
            std::ostringstream csv;
            write_csv(csv, orbit);
            detail::emit(csv.str(), out_path, out);
            if (orbit.halted_early)
                err << "note: orbit halted early at coordinate modulus 1 - 1e-14\n";
            return kExitOk;
        }
        if (app.got_subcommand(c_find)) {
            const SelfMap2 F{detail::resolve_map(phi_src), detail::resolve_map(psi_src)};
            const ContinuationResult res = continuation_dw(F, k_max);
            std::ostringstream csv;
            write_csv(csv, res);
            detail::emit(csv.str(), out_path, out);
            Record r;
            r.add("stages", res.stages.size());
            r.add("degenerate", res.degenerate);
            r.add("interior_fixed_point", res.interior_fixed_point);
            r.add("truncated", res.truncated);
            if (!res.interior_fixed_point && !res.stages.empty()) {
                r.add("tau_estimate", format_complex(res.tau_estimate.t1) + ";" +
                                          format_complex(res.tau_estimate.t2));
                if (!res.degenerate) r.add("K_estimate", res.k_estimate);
            }
            (out_path.empty() ? err : out) << r.str();  // keep the CSV stream clean
            return kExitOk;
        }
        if (app.got_subcommand(c_wolff)) {
            const SelfMap2 F{detail::resolve_map(phi_src), detail::resolve_map(psi_src)};
            const WolffSetReport rep = wolff_set_structure(F, parse_boundary(tau_str), {},
                                                           detail::resolve_seed(seed));
            Record r;
            r.add("case", to_string(rep.kind));
            r.child("phi_class") = to_record(rep.phi_class);
            r.child("psi_class") = to_record(rep.psi_class);
            r.add("witness_tau", format_complex(rep.witness_tau.t1) + ";" +
                                     format_complex(rep.witness_tau.t2));
            if (std::isfinite(rep.facial_check_phi))
                r.add("facial_check_phi", rep.facial_check_phi);
            if (std::isfinite(rep.facial_check_psi))
                r.add("facial_check_psi", rep.facial_check_psi);
            detail::emit(r.str(), out_path, out);
            return kExitOk;
        }
        if (app.got_subcommand(c_herve)) {
            const SelfMap2 F{detail::resolve_map(phi_src), detail::resolve_map(psi_src)};
            const HerveCase hc = herve_case(F, parse_boundary(tau_str));
            Record r;
            r.add("case", to_string(hc.kind));
            r.add("expected", hc.expected);
            r.add("refined", hc.refined);
            if (hc.kind != HerveCase::Case::CoordProjection) {
                r.child("phi_class") = to_record(hc.phi_class);
                r.child("psi_class") = to_record(hc.psi_class);
            }
            detail::emit(r.str(), out_path, out);
            return kExitOk;
        }
    } catch (const BoundaryError& e) {
        err << "error: " << e.what() << "\n";
        return e.kind == BoundaryError::Kind::Unclassifiable ? kExitAmbiguous : kExitError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    err << "no subcommand\n";
    return kExitUsage;
}

}  // namespace bidisk::cli
