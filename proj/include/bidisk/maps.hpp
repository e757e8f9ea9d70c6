#pragma once

// Holomorphic self-maps: scalar maps of the bidisk into the disk and pairs
// of them as self-maps of the bidisk.  A scalar map is one of
//   - a bivariate rational function given by coefficient matrices
//     (entry [i][j] multiplies (z1)^i (z2)^j),
//   - a named builtin (the worked example maps, evaluated in
//     cancellation-robust closed forms), or
//   - a blend s*(w1*z1 + w2*z2) + (1-s)*c, a guaranteed strict self-map
//     family used to generate property-test inputs.
//
// Builtins are evaluated through the corner variables a = 1-z1, b = 1-z2
// (exact subtractions for coordinates near 1); the naive formulas lose all
// relative accuracy in 1-|value| near the fixed corner, which breaks orbit
// telemetry long before the iteration halt threshold.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "bidisk/geometry.hpp"
#include "bidisk/sampling.hpp"

namespace bidisk {

struct MapError : std::runtime_error {
    enum class Kind {
        DenominatorNearZero,
        ParseError,
        NotASelfMap,
        DenominatorVanishes,
        UnknownBuiltin,
    };
    Kind kind;
    MapError(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}
};

using CoeffMatrix = std::vector<std::vector<Complex>>;

struct RationalForm {
    CoeffMatrix num;
    CoeffMatrix den;
};

enum class Builtin {
    HerveEx1Phi,   // (1 - z1 z2) / (2 - z1 - z2)
    McpEx1Psi,     // log map, (-3+5z)/(5-3z) on the diagonal
    SolaEx2Phi,    // -(3 z1 z2 - z1 - z2 - 1) / (3 - z1 - z2 - z1 z2)
    AvgShiftPhi,   // (z1 + (1+z2)/2) / 2
    AvgShiftPsi,   // (z2 + (1+z1)/2) / 2
};

struct BlendForm {
    double s;
    double w1;
    double w2;
    Complex c;
};

namespace detail {

// Vanishing-denominator guard at evaluation time.
inline constexpr double kDenomEvalTol = 1e-14;

inline Complex guard_div(const Complex& num, const Complex& den) {
    if (std::abs(den) < kDenomEvalTol)
        throw MapError(MapError::Kind::DenominatorNearZero, "denominator below 1e-14");
    return num / den;
}

inline Complex eval_poly(const CoeffMatrix& c, const Complex& z1, const Complex& z2) {
    // Horner in z1 over rows, each row Horner in z2.
    Complex acc{0.0, 0.0};
    for (std::size_t i = c.size(); i-- > 0;) {
        Complex row{0.0, 0.0};
        for (std::size_t j = c[i].size(); j-- > 0;) row = row * z2 + c[i][j];
        acc = acc * z1 + row;
    }
    return acc;
}

inline Complex eval_herve(const Complex& z1, const Complex& z2) {
    const Complex a = 1.0 - z1, b = 1.0 - z2;
    return 1.0 - guard_div(a * b, a + b);
}

inline Complex eval_sola(const Complex& z1, const Complex& z2) {
    const Complex a = 1.0 - z1, b = 1.0 - z2;
    return 1.0 - guard_div(2.0 * (a * b), 2.0 * (a + b) - a * b);
}

// log1p(w)/w on the principal branch; the argument 1+w stays off (-inf,0]
// on the bidisk because both Cayley factors have positive real part.
inline Complex log1p_over(const Complex& w) {
    if (std::abs(w) < 1e-4) {
        // series to machine precision for |w| < 1e-4
        return 1.0 - w * (0.5 - w * (1.0 / 3.0 - w * (0.25 - w * 0.2)));
    }
    return std::log(1.0 + w) / w;
}

// The log map.  This is its off-diagonal log formula with the common
// factor (z2 - z1) cancelled:
//   psi = (1 - q g(w)) / (1 + q g(w)),
//   q = 4(1-z1)/(1+z1),  w = 2(z2-z1)/((1-z2)(1+z1)),  g(w) = log1p(w)/w.
// g is continued by its series across w = 0, where the expression reduces
// exactly to the diagonal branch (-3+5z1)/(5-3z1); no branch dispatch is
// needed and none would be safe (substituting the diagonal formula at a
// merely near-diagonal point loses O(|z1-z2|/(1-|z1|)) of the value).
inline Complex eval_mcp(const Complex& z1, const Complex& z2) {
    const Complex a = 1.0 - z1, b = 1.0 - z2;
    const Complex qg = guard_div(4.0 * a, 2.0 - a) * log1p_over(guard_div(2.0 * (a - b), b * (2.0 - a)));
    return 1.0 - guard_div(2.0 * qg, 1.0 + qg);
}

inline Complex eval_avg_phi(const Complex& z1, const Complex& z2) {
    const Complex a = 1.0 - z1, b = 1.0 - z2;
    return 1.0 - (2.0 * a + b) * 0.25;
}

inline Complex eval_avg_psi(const Complex& z1, const Complex& z2) {
    const Complex a = 1.0 - z1, b = 1.0 - z2;
    return 1.0 - (a + 2.0 * b) * 0.25;
}

}  // namespace detail

class ScalarMap {
  public:
    static ScalarMap rational(CoeffMatrix num, CoeffMatrix den, std::string name = "rational") {
        if (num.empty() || den.empty())
            throw MapError(MapError::Kind::ParseError, "empty coefficient matrix");
        ScalarMap m;
        m.form_ = RationalForm{std::move(num), std::move(den)};
        m.name_ = std::move(name);
        return m;
    }

    static ScalarMap builtin(Builtin b) {
        ScalarMap m;
        m.form_ = b;
        m.name_ = builtin_name(b);
        return m;
    }

    static ScalarMap builtin(const std::string& name) { return builtin(builtin_from_name(name)); }

    static ScalarMap blend(double s, double w1, double w2, Complex c) {
        if (!(s > 0.0 && s <= 1.0) || w1 < 0.0 || w2 < 0.0 ||
            std::abs(w1 + w2 - 1.0) > 1e-12 || std::abs(c) >= 1.0)
            throw MapError(MapError::Kind::ParseError, "invalid blend parameters");
        ScalarMap m;
        m.form_ = BlendForm{s, w1, w2, c};
        m.name_ = "blend";
        return m;
    }

    Complex operator()(const Complex& z1, const Complex& z2) const {
        if (const auto* r = std::get_if<RationalForm>(&form_))
            return detail::guard_div(detail::eval_poly(r->num, z1, z2),
                                     detail::eval_poly(r->den, z1, z2));
        if (const auto* b = std::get_if<Builtin>(&form_)) {
            switch (*b) {
                case Builtin::HerveEx1Phi: return detail::eval_herve(z1, z2);
                case Builtin::McpEx1Psi: return detail::eval_mcp(z1, z2);
                case Builtin::SolaEx2Phi: return detail::eval_sola(z1, z2);
                case Builtin::AvgShiftPhi: return detail::eval_avg_phi(z1, z2);
                case Builtin::AvgShiftPsi: return detail::eval_avg_psi(z1, z2);
            }
        }
        const auto& bl = std::get<BlendForm>(form_);
        return bl.s * (bl.w1 * z1 + bl.w2 * z2) + (1.0 - bl.s) * bl.c;
    }

    Complex operator()(const BidiskPoint& z) const { return (*this)(z.z1, z.z2); }

    const std::string& name() const { return name_; }

    bool is_rational() const { return std::holds_alternative<RationalForm>(form_); }
    bool is_builtin() const { return std::holds_alternative<Builtin>(form_); }
    const RationalForm& rational_form() const { return std::get<RationalForm>(form_); }
    Builtin builtin_id() const { return std::get<Builtin>(form_); }

    // Structural test for the coordinate projections z -> z_coord.
    bool is_projection(int coord) const {
        if (const auto* bl = std::get_if<BlendForm>(&form_)) {
            const double wc = coord == 1 ? bl->w1 : bl->w2;
            return bl->s == 1.0 && wc == 1.0;
        }
        const auto* r = std::get_if<RationalForm>(&form_);
        if (!r) return false;
        if (r->den.size() != 1 || r->den[0].size() != 1) return false;
        const Complex d = r->den[0][0];
        if (d == Complex{0.0, 0.0}) return false;
        bool found = false;
        for (std::size_t i = 0; i < r->num.size(); ++i)
            for (std::size_t j = 0; j < r->num[i].size(); ++j) {
                const Complex c = r->num[i][j];
                if (c == Complex{0.0, 0.0}) continue;
                const bool is_coord = coord == 1 ? (i == 1 && j == 0) : (i == 0 && j == 1);
                if (!is_coord || c != d) return false;
                found = true;
            }
        return found;
    }

    static const char* builtin_name(Builtin b) {
        switch (b) {
            case Builtin::HerveEx1Phi: return "herve_ex1_phi";
            case Builtin::McpEx1Psi: return "mcp_ex1_psi";
            case Builtin::SolaEx2Phi: return "sola_ex2_phi";
            case Builtin::AvgShiftPhi: return "avg_shift_phi";
            case Builtin::AvgShiftPsi: return "avg_shift_psi";
        }
        return "?";
    }

    static Builtin builtin_from_name(const std::string& name) {
        if (name == "herve_ex1_phi") return Builtin::HerveEx1Phi;
        if (name == "mcp_ex1_psi") return Builtin::McpEx1Psi;
        if (name == "sola_ex2_phi") return Builtin::SolaEx2Phi;
        if (name == "avg_shift_phi") return Builtin::AvgShiftPhi;
        if (name == "avg_shift_psi") return Builtin::AvgShiftPsi;
        throw MapError(MapError::Kind::UnknownBuiltin, "unknown builtin map: " + name);
    }

    friend ScalarMap swap_args(const ScalarMap& m);

  private:
    ScalarMap() = default;
    std::variant<RationalForm, Builtin, BlendForm> form_;
    std::string name_;
};

// The map (z1, z2) -> m(z2, z1).  Rational forms transpose their coefficient
// matrices; builtins map to their swapped partner (the example maps are
// symmetric except for the avg_shift pair, which swap into each other).
inline ScalarMap swap_args(const ScalarMap& m) {
    if (const auto* r = std::get_if<RationalForm>(&m.form_)) {
        auto transpose = [](const CoeffMatrix& c) {
            std::size_t cols = 0;
            for (const auto& row : c) cols = std::max(cols, row.size());
            CoeffMatrix t(cols, std::vector<Complex>(c.size(), Complex{0.0, 0.0}));
            for (std::size_t i = 0; i < c.size(); ++i)
                for (std::size_t j = 0; j < c[i].size(); ++j) t[j][i] = c[i][j];
            return t;
        };
        return ScalarMap::rational(transpose(r->num), transpose(r->den), "swap(" + m.name_ + ")");
    }
    if (const auto* b = std::get_if<Builtin>(&m.form_)) {
        switch (*b) {
            case Builtin::AvgShiftPhi: return ScalarMap::builtin(Builtin::AvgShiftPsi);
            case Builtin::AvgShiftPsi: return ScalarMap::builtin(Builtin::AvgShiftPhi);
            default: return m;  // symmetric in (z1, z2)
        }
    }
    const auto& bl = std::get<BlendForm>(m.form_);
    return ScalarMap::blend(bl.s, bl.w2, bl.w1, bl.c);
}

enum class Side { Left, Right };

inline Side opposite(Side s) { return s == Side::Left ? Side::Right : Side::Left; }

// Slice function: Left fixes the second argument, phi_mu(z) = m(z, mu);
// Right fixes the first, m(mu, z).
inline Complex eval_slice(const ScalarMap& m, Side side, const Complex& fixed, const DiskPoint& z) {
    return side == Side::Left ? m(z.z, fixed) : m(fixed, z.z);
}

struct SelfMap2 {
    ScalarMap phi;
    ScalarMap psi;

    BidiskPoint operator()(const BidiskPoint& z) const { return {phi(z), psi(z)}; }
};

// ---------------------------------------------------------------------------
// Map-spec documents (JSON): {"builtin": name} or {"num": [[..]], "den": [[..]]}
// with complex entries as [re, im] pairs or bare reals.
// ---------------------------------------------------------------------------

inline constexpr int kValidationSamples = 4096;
inline constexpr double kSchurSlack = 1e-9;
inline constexpr double kValidationDenTol = 1e-9;

// Sampled self-map validation over the fixed low-discrepancy point set.
inline void validate_self_map(const ScalarMap& m) {
    const BidiskSampler sampler(kDefaultSeed);
    for (int i = 0; i < kValidationSamples; ++i) {
        const BidiskPoint z = sampler(static_cast<std::uint64_t>(i));
        if (m.is_rational()) {
            const Complex den = detail::eval_poly(m.rational_form().den, z.z1, z.z2);
            if (std::abs(den) < kValidationDenTol)
                throw MapError(MapError::Kind::DenominatorVanishes,
                               "denominator vanishes on a validation sample");
        }
        if (std::abs(m(z)) > 1.0 + kSchurSlack)
            throw MapError(MapError::Kind::NotASelfMap,
                           "sampled modulus exceeds 1 (not a self-map)");
    }
}

namespace detail {

inline Complex parse_entry(const nlohmann::json& e) {
    if (e.is_number()) return Complex{e.get<double>(), 0.0};
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
        return Complex{e[0].get<double>(), e[1].get<double>()};
    throw MapError(MapError::Kind::ParseError, "coefficient entry must be a real or [re, im]");
}

inline CoeffMatrix parse_matrix(const nlohmann::json& rows) {
    if (!rows.is_array() || rows.empty())
        throw MapError(MapError::Kind::ParseError, "coefficient matrix must be a nonempty array");
    CoeffMatrix c;
    for (const auto& row : rows) {
        if (!row.is_array() || row.empty())
            throw MapError(MapError::Kind::ParseError, "coefficient row must be a nonempty array");
        std::vector<Complex> r;
        for (const auto& e : row) r.push_back(parse_entry(e));
        c.push_back(std::move(r));
    }
    return c;
}

}  // namespace detail

inline ScalarMap load_map(const nlohmann::json& doc) {
    if (!doc.is_object())
        throw MapError(MapError::Kind::ParseError, "map spec must be an object");
    if (doc.contains("builtin")) {
        if (!doc["builtin"].is_string())
            throw MapError(MapError::Kind::ParseError, "\"builtin\" must be a name");
        return ScalarMap::builtin(doc["builtin"].get<std::string>());
    }
    if (!doc.contains("num") || !doc.contains("den"))
        throw MapError(MapError::Kind::ParseError, "map spec needs \"builtin\" or \"num\"/\"den\"");
    ScalarMap m = ScalarMap::rational(detail::parse_matrix(doc["num"]),
                                      detail::parse_matrix(doc["den"]));
    validate_self_map(m);
    return m;
}

inline ScalarMap load_map_string(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded())
        throw MapError(MapError::Kind::ParseError, "map spec is not valid JSON");
    return load_map(doc);
}

inline nlohmann::json map_to_json(const ScalarMap& m) {
    nlohmann::json doc;
    if (m.is_builtin()) {
        doc["builtin"] = m.name();
        return doc;
    }
    if (!m.is_rational())
        throw MapError(MapError::Kind::ParseError, "only builtin and rational maps serialize");
    auto matrix = [](const CoeffMatrix& c) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : c) {
            nlohmann::json r = nlohmann::json::array();
            for (const Complex& e : row) {
                if (e.imag() == 0.0)
                    r.push_back(e.real());
                else
                    r.push_back(nlohmann::json::array({e.real(), e.imag()}));
            }
            rows.push_back(std::move(r));
        }
        return rows;
    };
    doc["num"] = matrix(m.rational_form().num);
    doc["den"] = matrix(m.rational_form().den);
    return doc;
}

}  // namespace bidisk
