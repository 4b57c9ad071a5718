#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "bellkit/collins_gisin.hpp"
#include "bellkit/dd.hpp"
#include "bellkit/functional.hpp"
#include "bellkit/linalg.hpp"
#include "bellkit/polytope.hpp"
#include "bellkit/simplex.hpp"

namespace bellkit {

/// Stable text key for exact-rational vectors, for hashing.
inline std::string qvec_key(const QVec& v) {
    std::string s;
    s.reserve(v.size() * 4);
    for (const Rational& q : v) {
        s += rational_str(q);
        s += ' ';
    }
    return s;
}

inline void sort_dedup_points(QMat& pts) {
    sort_rows(pts);
    dedup_sorted_rows(pts);
}

namespace detail {

/// Dehomogenizes DD output for a polytope run: every ray must have a positive
/// last coordinate; a zero one is a recession direction, i.e. unboundedness.
inline QMat dehomogenize(const std::vector<ZVec>& rays, const AffineChart& chart) {
    const int k = chart.dim();
    QMat pts;
    bool any_vertex = false;
    for (const ZVec& r : rays)
        if (r[k] > 0) any_vertex = true;
    if (!any_vertex) throw EmptyPolytopeError("H-representation has no feasible point");
    for (const ZVec& r : rays) {
        if (r[k] == 0)
            throw UnboundedPolytopeError("H-representation describes an unbounded set");
        QVec t(k);
        for (int j = 0; j < k; ++j) t[j] = Rational(r[j], r[k]);
        pts.push_back(chart.from_chart(t));
    }
    return pts;
}

} // namespace detail

/// Exact vertex enumeration. Equalities are eliminated onto a chart, the
/// reduced system is homogenized to a cone over the polytope, and its extreme
/// rays (double description) dehomogenize to the vertices. Output points are
/// sorted lexicographically.
inline VRep vertices_from_hrep(const HRep& h) {
    auto chart_opt = chart_from_equalities(h.eqs, h.dim);
    if (!chart_opt) throw EmptyPolytopeError("equality constraints are inconsistent");
    const AffineChart& chart = *chart_opt;
    const int k = chart.dim();

    QMat reduced;
    for (const QVec& row : h.ineqs) {
        QVec g(row.begin(), row.end() - 1);
        auto [gp, hp] = chart.pull_inequality(g, row.back());
        bool zero = true;
        for (const Rational& v : gp)
            if (v != 0) {
                zero = false;
                break;
            }
        if (zero) {
            if (hp < 0) throw EmptyPolytopeError("inequalities are inconsistent");
            continue;
        }
        gp.push_back(hp);
        reduced.push_back(std::move(gp));
    }

    VRep out;
    out.dim = h.dim;
    if (k == 0) {
        out.points.push_back(chart.origin);
        return out;
    }

    std::vector<ZVec> rows;
    for (const QVec& r : reduced) {
        QVec hom(k + 1);
        for (int j = 0; j < k; ++j) hom[j] = r[j];
        hom[k] = -r[k]; // g.t - rhs*tau <= 0
        rows.push_back(to_primitive_integer(hom));
    }
    {
        ZVec tau(k + 1, Int(0));
        tau[k] = -1; // tau >= 0
        rows.push_back(std::move(tau));
    }
    std::sort(rows.begin(), rows.end(),
              [](const ZVec& a, const ZVec& b) { return lex_compare(a, b) < 0; });
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());

    std::vector<ZVec> rays;
    try {
        rays = dd::extreme_rays(rows, k + 1);
    } catch (const Error&) {
        // Rows not spanning means the homogenized cone has a lineality space,
        // which for a feasible system means unbounded directions.
        throw UnboundedPolytopeError("H-representation describes an unbounded set");
    }
    if (rays.empty()) throw EmptyPolytopeError("H-representation has no feasible point");
    out.points = detail::dehomogenize(rays, chart);
    sort_dedup_points(out.points);
    return out;
}

/// Exact facet enumeration via the polar dual: translate so the centroid of
/// the (deduplicated) points sits at the origin of the affine hull, enumerate
/// the vertices of the polar with double description, and read each polar
/// vertex as a facet. Equalities describing the affine hull are listed
/// separately. Inequality rows are primitive integers, sorted. A nonzero
/// `max_live` caps the live rays of the double description pass, surfacing
/// EnumerationOverflowError instead of grinding through a blowup.
inline HRep facets_from_vrep(const VRep& v, std::size_t max_live = 0) {
    if (v.points.empty()) throw EmptyPolytopeError("facet enumeration of an empty point set");
    QMat pts = v.points;
    sort_dedup_points(pts);

    AffineChart chart = affine_hull(pts);
    const int k = chart.dim();
    HRep out;
    out.dim = v.dim;
    out.eqs = hull_equalities(chart);
    if (k == 0) return out;

    QMat tpts;
    tpts.reserve(pts.size());
    for (const QVec& p : pts) tpts.push_back(chart.to_chart(p));
    QVec centroid(k, Rational(0));
    for (const QVec& t : tpts)
        for (int j = 0; j < k; ++j) centroid[j] += t[j];
    for (int j = 0; j < k; ++j) centroid[j] /= static_cast<int>(tpts.size());

    // Polar of P - centroid: { a : (t - centroid) . a <= 1 for all points }.
    // Its vertices (a, found as extreme rays of the homogenized cone) are in
    // one-to-one correspondence with the facets of P.
    //
    // The double description pass is inserted in a fixed order keyed by the
    // sorted multiset of each point's original coordinates (ties by plain
    // lex). Intermediate ray counts depend heavily on insertion order, and
    // this key groups points that are relabelings of one another while
    // putting the most degenerate ones first, which keeps the prefix hulls
    // symmetric and small. Plain lex order stalls on the larger restricted
    // polytopes where this order finishes in seconds.
    std::vector<std::pair<QVec, std::size_t>> keyed;
    keyed.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        QVec key = pts[i];
        std::sort(key.begin(), key.end());
        keyed.emplace_back(std::move(key), i);
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
    });

    std::vector<ZVec> rows;
    rows.reserve(tpts.size() + 1);
    {
        ZVec tau(k + 1, Int(0));
        tau[k] = -1;
        rows.push_back(std::move(tau));
    }
    for (const auto& [key, i] : keyed) {
        QVec row(k + 1);
        for (int j = 0; j < k; ++j) row[j] = tpts[i][j] - centroid[j];
        row[k] = -1;
        ZVec zrow = to_primitive_integer(row);
        // A point sitting exactly on the centroid reproduces the bounding row
        // already in front; the polar gains nothing from it.
        if (zrow != rows.front()) rows.push_back(std::move(zrow));
    }

    const std::vector<ZVec> rays = dd::extreme_rays(rows, k + 1, max_live);
    for (const ZVec& r : rays) {
        if (r[k] == 0)
            throw Error("polar polytope came out unbounded; input points may be degenerate");
        // Facet in chart coordinates: a . t <= tau + a . centroid.
        QVec a(k);
        for (int j = 0; j < k; ++j) a[j] = Rational(r[j]);
        Rational rhs = Rational(r[k]) + dot(a, centroid);
        auto [normal, offset] = chart.push_inequality(a, rhs);
        normal.push_back(offset);
        out.ineqs.push_back(normalize_inequality_row(std::move(normal)));
    }
    sort_rows(out.ineqs);
    dedup_sorted_rows(out.ineqs);
    return out;
}

/// Exact equality of convex hulls given by point lists. Fast paths: identical
/// deduplicated point sets, then hash-based containment of points; only
/// points missing from the other list go through a membership LP.
inline bool polytope_equal(const VRep& a, const VRep& b) {
    if (a.dim != b.dim) return false;
    QMat pa = a.points, pb = b.points;
    sort_dedup_points(pa);
    sort_dedup_points(pb);
    if (pa == pb) return true;
    if (pa.empty() || pb.empty()) return false;

    std::unordered_set<std::string> keys_a, keys_b;
    for (const QVec& p : pa) keys_a.insert(qvec_key(p));
    for (const QVec& p : pb) keys_b.insert(qvec_key(p));
    const VRep va{a.dim, pa}, vb{b.dim, pb};
    for (const QVec& p : pa)
        if (!keys_b.count(qvec_key(p)) && !member(p, vb)) return false;
    for (const QVec& p : pb)
        if (!keys_a.count(qvec_key(p)) && !member(p, va)) return false;
    return true;
}

/// A functional is a face of the polytope iff its bound is valid on all of it:
/// the touching set (possibly empty) is then a face.
inline bool is_face_of(const BellFunctional& f, const HRep& h) {
    const LpSolution sol = lp_max(f.coeff, h);
    if (sol.status != LpStatus::optimal)
        throw Error("face test needs a nonempty bounded polytope");
    return sol.value <= f.bound;
}

inline bool is_face_of(const BellFunctional& f, const VRep& v) {
    const LpSolution sol = lp_max(f.coeff, v);
    if (sol.status != LpStatus::optimal)
        throw Error("face test needs a nonempty polytope");
    return sol.value <= f.bound;
}

/// Vertices of the no-signaling polytope, enumerated on the Collins-Gisin
/// chart (where the polytope is full-dimensional) and mapped back to full
/// tables.
inline VRep ns_vertices(const Scenario& s) {
    const CollinsGisin cg(s);
    const HRep h = cg.hrep();
    const VRep chart_v = vertices_from_hrep(h);
    VRep out;
    out.dim = s.dim();
    out.points.reserve(chart_v.points.size());
    for (const QVec& t : chart_v.points) out.points.push_back(cg.to_table(t).values);
    sort_dedup_points(out.points);
    return out;
}

} // namespace bellkit
