#pragma once

// Serialization: complex scalars as "re,im", bidisk/boundary points as
// "re,im;re,im" (boundary flags inferred from the modulus), CSV emission at
// 17 significant digits with '.' decimal regardless of locale, and a small
// "key: value" structured-record writer with two-space nesting.

#include <cctype>
#include <charconv>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bidisk/boundary.hpp"
#include "bidisk/dynamics.hpp"
#include "bidisk/geometry.hpp"

namespace bidisk {

// to_chars/from_chars keep the number formats locale-independent.
inline std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline std::string format_complex(const Complex& z) {
    return format_double(z.real()) + "," + format_double(z.imag());
}

inline std::string format_bidisk(const BidiskPoint& z) {
    return format_complex(z.z1) + ";" + format_complex(z.z2);
}

inline double parse_double(const std::string& s) {
    const char* b = s.data();
    const char* e = s.data() + s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(*b))) ++b;
    if (b < e && *b == '+') ++b;
    double v{};
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc{}) throw std::invalid_argument("not a number: " + s);
    for (const char* p = res.ptr; p < e; ++p)
        if (!std::isspace(static_cast<unsigned char>(*p)))
            throw std::invalid_argument("trailing characters in number: " + s);
    return v;
}

// "re,im" or a bare real.
inline Complex parse_complex(const std::string& s) {
    const std::size_t comma = s.find(',');
    if (comma == std::string::npos) return {parse_double(s), 0.0};
    return {parse_double(s.substr(0, comma)), parse_double(s.substr(comma + 1))};
}

// "re,im;re,im"
inline std::pair<Complex, Complex> parse_complex_pair(const std::string& s) {
    const std::size_t semi = s.find(';');
    if (semi == std::string::npos)
        throw std::invalid_argument("expected \"re,im;re,im\", got: " + s);
    return {parse_complex(s.substr(0, semi)), parse_complex(s.substr(semi + 1))};
}

inline BidiskPoint parse_bidisk(const std::string& s) {
    const auto [z1, z2] = parse_complex_pair(s);
    return {z1, z2};
}

inline BoundaryPoint parse_boundary(const std::string& s) {
    const auto [t1, t2] = parse_complex_pair(s);
    return make_boundary_point(t1, t2);
}

// ---------------------------------------------------------------------------
// Structured records.
// ---------------------------------------------------------------------------

class Record {
  public:
    void add(const std::string& key, const std::string& value) {
        entries_.push_back({key, value, nullptr});
    }
    void add(const std::string& key, const char* value) { add(key, std::string(value)); }
    void add(const std::string& key, double value) { add(key, format_double(value)); }
    void add(const std::string& key, std::size_t value) { add(key, std::to_string(value)); }
    void add(const std::string& key, int value) { add(key, std::to_string(value)); }
    void add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }

    Record& child(const std::string& key) {
        entries_.push_back({key, "", std::make_unique<Record>()});
        return *entries_.back().nested;
    }

    void print(std::ostream& os, int indent = 0) const {
        const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
        for (const auto& e : entries_) {
            if (e.nested) {
                os << pad << e.key << ":\n";
                e.nested->print(os, indent + 1);
            } else {
                os << pad << e.key << ": " << value_or_empty(e) << "\n";
            }
        }
    }

    std::string str() const {
        std::ostringstream os;
        print(os);
        return os.str();
    }

  private:
    struct Entry {
        std::string key;
        std::string value;
        std::unique_ptr<Record> nested;
    };
    static const std::string& value_or_empty(const Entry& e) { return e.value; }
    std::vector<Entry> entries_;
};

inline Record to_record(const DWClass& c) {
    Record r;
    r.add("kind", to_string(c.kind));
    switch (c.kind) {
        case DWClass::Kind::TypeI_CPoint: r.add("alpha", c.alpha); break;
        case DWClass::Kind::TypeI_NonC: r.add("k_limit", c.k_limit); break;
        case DWClass::Kind::TypeII: r.add("A", c.constant_a); break;
        case DWClass::Kind::Neither:
        case DWClass::Kind::Ambiguous: r.add("k_min", c.k_min); break;
        default: break;
    }
    if (!c.diagnostics.empty()) r.add("diagnostics", c.diagnostics);
    return r;
}

// ---------------------------------------------------------------------------
// CSV writers (column layouts are part of the external interface).
// ---------------------------------------------------------------------------

inline void write_csv(std::ostream& os, const KCurve& c) {
    os << "M,K,imag_residual,error_estimate\n";
    for (std::size_t i = 0; i < c.m_grid.size(); ++i)
        os << format_double(c.m_grid[i]) << ',' << format_double(c.k_values[i]) << ','
           << format_double(c.imag_residuals[i]) << ',' << format_double(c.error_estimates[i])
           << '\n';
}

inline void write_csv(std::ostream& os, const Orbit& orbit) {
    os << "n,re1,im1,re2,im2,A,B,R\n";
    for (std::size_t i = 0; i < orbit.points.size(); ++i) {
        const BidiskPoint& z = orbit.points[i];
        os << i << ',' << format_double(z.z1.real()) << ',' << format_double(z.z1.imag()) << ','
           << format_double(z.z2.real()) << ',' << format_double(z.z2.imag()) << ','
           << format_double(orbit.a_seq[i]) << ',' << format_double(orbit.b_seq[i]) << ','
           << format_double(orbit.r_seq[i]) << '\n';
    }
}

inline void write_csv(std::ostream& os, const ContinuationResult& res) {
    os << "k,r,re1,im1,re2,im2,residual,ratio\n";
    for (const ContinuationStage& s : res.stages) {
        const BidiskPoint& z = s.fixed_point;
        os << s.k << ',' << format_double(s.r) << ',' << format_double(z.z1.real()) << ','
           << format_double(z.z1.imag()) << ',' << format_double(z.z2.real()) << ','
           << format_double(z.z2.imag()) << ',' << format_double(s.residual) << ','
           << format_double(s.ratio) << '\n';
    }
}

}  // namespace bidisk
