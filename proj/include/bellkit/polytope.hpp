#pragma once

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bellkit/rational.hpp"

namespace bellkit {

/// Vertex representation: a list of points whose convex hull is the polytope.
/// Points are flat rational vectors of equal length.
struct VRep {
    int dim = 0;
    QMat points;
};

/// Half-space representation. Each inequality row is (c_0..c_{d-1}, rhs)
/// meaning c.x <= rhs; each equality row means c.x = rhs. Inequality rows are
/// primitive integer vectors; equality rows additionally fix the sign of the
/// first nonzero coefficient to be positive.
struct HRep {
    int dim = 0;
    QMat ineqs;
    QMat eqs;
};

inline void sort_rows(QMat& rows) {
    std::sort(rows.begin(), rows.end(),
              [](const QVec& a, const QVec& b) { return lex_compare(a, b) < 0; });
}

inline void dedup_sorted_rows(QMat& rows) {
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
}

/// Scales (normal, rhs) to a primitive integer row. Pure positive rescaling,
/// so the half-space is unchanged.
inline QVec normalize_inequality_row(QVec row) {
    ZVec z = to_primitive_integer(row);
    return to_rational(z);
}

inline QVec normalize_equality_row(QVec row) {
    ZVec z = to_primitive_integer(row);
    canonical_sign(z);
    return to_rational(z);
}

inline Rational evaluate_row(const QVec& row, const QVec& x) {
    Rational s(0);
    for (std::size_t i = 0; i < x.size(); ++i) s += row[i] * x[i];
    return s;
}

/// rhs - c.x ; nonnegative iff x satisfies the inequality row.
inline Rational row_slack(const QVec& row, const QVec& x) {
    return row.back() - evaluate_row(row, x);
}

namespace detail {

inline void write_rows(std::ostream& os, const QMat& rows) {
    for (const QVec& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ' ';
            os << rational_str(row[i]);
        }
        os << '\n';
    }
}

inline QMat read_rows(std::istream& is, int count, int width, const char* what) {
    QMat rows;
    rows.reserve(count);
    for (int i = 0; i < count; ++i) {
        QVec row;
        row.reserve(width);
        for (int j = 0; j < width; ++j) {
            std::string tok;
            if (!(is >> tok)) throw ParseError(std::string("truncated ") + what + " block");
            row.push_back(parse_rational(tok));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace detail

/// Text cache format, V-representation:
///   V <n_points> <dim>
///   <dim rationals per line, one line per point>
inline void write_vrep(std::ostream& os, const VRep& v) {
    os << "V " << v.points.size() << ' ' << v.dim << '\n';
    detail::write_rows(os, v.points);
}

/// Text cache format, H-representation:
///   H <n_ineqs> <dim>
///   <dim+1 rationals per line: coefficients then rhs>
/// optionally followed by an equality block:
///   E <n_eqs> <dim>
///   <dim+1 rationals per line>
inline void write_hrep(std::ostream& os, const HRep& h) {
    os << "H " << h.ineqs.size() << ' ' << h.dim << '\n';
    detail::write_rows(os, h.ineqs);
    if (!h.eqs.empty()) {
        os << "E " << h.eqs.size() << ' ' << h.dim << '\n';
        detail::write_rows(os, h.eqs);
    }
}

inline VRep read_vrep(std::istream& is) {
    std::string tag;
    int n = 0, d = 0;
    if (!(is >> tag >> n >> d) || tag != "V") throw ParseError("expected 'V n d' header");
    if (n < 0 || d < 0) throw ParseError("negative counts in V header");
    VRep v;
    v.dim = d;
    v.points = detail::read_rows(is, n, d, "vertex");
    return v;
}

inline HRep read_hrep(std::istream& is) {
    std::string tag;
    int n = 0, d = 0;
    if (!(is >> tag >> n >> d) || tag != "H") throw ParseError("expected 'H n d' header");
    if (n < 0 || d < 0) throw ParseError("negative counts in H header");
    HRep h;
    h.dim = d;
    h.ineqs = detail::read_rows(is, n, d + 1, "inequality");
    if (is >> tag) {
        if (tag != "E") throw ParseError("expected 'E m d' after inequality block");
        int m = 0, d2 = 0;
        if (!(is >> m >> d2) || d2 != d || m < 0) throw ParseError("bad E header");
        h.eqs = detail::read_rows(is, m, d + 1, "equality");
    }
    return h;
}

inline std::string vrep_to_string(const VRep& v) {
    std::ostringstream os;
    write_vrep(os, v);
    return os.str();
}

inline std::string hrep_to_string(const HRep& h) {
    std::ostringstream os;
    write_hrep(os, h);
    return os.str();
}

} // namespace bellkit
