#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bellkit/hull.hpp"
#include "bellkit/relabeling.hpp"

namespace bellkit {

/// Facet enumeration output for a relabeling-symmetric polytope: every facet
/// inequality, plus the orbit decomposition the enumeration worked through.
/// `orbits` matches what orbit_classify would report on `hrep.ineqs`: one
/// canonical functional per orbit with the orbit size as multiplicity.
struct FacetOrbitReport {
    HRep hrep;
    std::vector<Orbit> orbits;
};

namespace detail {

/// Inequality a . t <= c on an affine chart, kept primitive-integer scaled.
struct ChartIneq {
    QVec a;
    Rational c;
};

inline ChartIneq normalize_chart_ineq(QVec a, Rational c) {
    QVec joint = std::move(a);
    joint.push_back(std::move(c));
    ZVec z = to_primitive_integer(joint);
    ChartIneq out;
    out.a.assign(z.begin(), z.end() - 1);
    out.c = Rational(z.back());
    return out;
}

inline std::vector<Rational> ineq_slacks(const QMat& pts, const ChartIneq& f) {
    std::vector<Rational> slack;
    slack.reserve(pts.size());
    for (const QVec& t : pts) slack.push_back(f.c - dot(f.a, t));
    return slack;
}

/// The inequality (u, u0) - nu (f, c) with nu the minimum of
/// (u0 - u . q) / slack_f(q) over points q off the facet f. Points tight on f
/// keep their u-slack, so validity of u on f's tight set carries over, while
/// the minimizers leave f's hyperplane and enlarge the affine span of the
/// tight set. With u a ridge inequality of f (valid on the facet, tight
/// exactly on the ridge) this is the unique neighbouring facet across that
/// ridge; u's values off the facet do not matter.
inline ChartIneq rotate_off(const QMat& pts, const ChartIneq& f,
                            const std::vector<Rational>& slack_f, const QVec& u,
                            const Rational& u0) {
    bool found = false;
    Rational nu;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (slack_f[i] == 0) continue;
        Rational ratio = (u0 - dot(u, pts[i])) / slack_f[i];
        if (!found || ratio < nu) {
            nu = std::move(ratio);
            found = true;
        }
    }
    if (!found) throw Error("every point is tight; the hull is not full-dimensional");
    QVec a(u);
    for (std::size_t j = 0; j < a.size(); ++j) a[j] -= nu * f.a[j];
    return normalize_chart_ineq(std::move(a), u0 - nu * f.c);
}

/// One facet of the full-dimensional hull of `pts`, by rotating a supporting
/// hyperplane until its tight set spans a hyperplane. Each rotation pivots
/// around the affine hull of the current tight set, so the rank grows every
/// step and at most dim(pts) rotations happen.
inline ChartIneq initial_facet(const QMat& pts, int k) {
    ChartIneq f;
    f.a.assign(k, Rational(0));
    f.a[0] = 1;
    f.c = dot(f.a, pts[0]);
    for (const QVec& t : pts) {
        Rational v = dot(f.a, t);
        if (v > f.c) f.c = std::move(v);
    }
    for (;;) {
        const std::vector<Rational> slack = ineq_slacks(pts, f);
        QMat diffs;
        const QVec* t0 = nullptr;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (slack[i] != 0) continue;
            if (!t0) {
                t0 = &pts[i];
                continue;
            }
            QVec d = pts[i];
            for (int j = 0; j < k; ++j) d[j] -= (*t0)[j];
            diffs.push_back(std::move(d));
        }
        if (!t0) throw Error("supporting hyperplane lost its tight set");
        const QMat perp = nullspace(diffs, k);
        if (static_cast<int>(perp.size()) <= 1) return f; // tight set spans a hyperplane
        // Pick a perpendicular direction not parallel to f itself (f always
        // lies in the perpendicular space of its own tight set).
        int ref = 0;
        while (f.a[ref] == 0) ++ref;
        const QVec* w = nullptr;
        for (const QVec& cand : perp) {
            const Rational scale = cand[ref] / f.a[ref];
            bool parallel = true;
            for (int j = 0; j < k; ++j)
                if (cand[j] != scale * f.a[j]) {
                    parallel = false;
                    break;
                }
            if (!parallel) {
                w = &cand;
                break;
            }
        }
        if (!w) throw Error("no rotation direction besides the hyperplane normal");
        f = rotate_off(pts, f, slack, *w, dot(*w, *t0));
    }
}

inline std::string zvec_key(const ZVec& z) {
    std::string out;
    out.reserve(z.size() * 4);
    for (const Int& x : z) {
        out += x.str();
        out += ',';
    }
    return out;
}

using PermRefs = std::vector<const std::vector<int>*>;

/// Facet representatives of conv(pts), at most one per orbit under `perms`
/// (full-space coordinate permutations that must stabilize the point set).
/// Rows are full-space inequalities (normal..., offset) in the push gauge of
/// the point set's own affine chart. Direct double description runs first
/// under a live-ray budget and usually wins, returning every facet; when it
/// blows up, the walk goes facet by facet instead: the ridges of a facet are
/// the facets of its vertex set, enumerated recursively under the facet's
/// stabilizer, and rotating across one ridge per stabilizer orbit reaches
/// every neighbouring facet orbit. Callers must tolerate several
/// representatives per orbit.
inline QMat facet_orbit_reps(const QMat& pts, const PermRefs& perms, int depth) {
    const AffineChart chart = affine_hull(pts);
    const int k = chart.dim();
    const int full = static_cast<int>(pts[0].size());
    if (k == 0) return {};
    if (k == 1) {
        QMat tpts;
        for (const QVec& p : pts) tpts.push_back(chart.to_chart(p));
        QMat out;
        for (int sgn : {1, -1}) {
            ChartIneq f;
            f.a = {Rational(sgn)};
            f.c = dot(f.a, tpts[0]);
            for (const QVec& t : tpts) {
                Rational v = dot(f.a, t);
                if (v > f.c) f.c = std::move(v);
            }
            auto [normal, offset] = chart.push_inequality(f.a, f.c);
            normal.push_back(std::move(offset));
            out.push_back(normalize_inequality_row(std::move(normal)));
        }
        return out;
    }
    // Too little symmetry to prune with: the decomposition cannot beat the
    // direct enumeration, so run it unbudgeted.
    if (perms.size() <= 2 || pts.size() <= 2 * static_cast<std::size_t>(k))
        return facets_from_vrep(VRep{full, pts}).ineqs;
    try {
        const std::size_t budget = std::max<std::size_t>(4000, 4 * pts.size());
        return facets_from_vrep(VRep{full, pts}, budget).ineqs;
    } catch (const EnumerationOverflowError&) {
        // fall through to the orbit walk
    }

    QMat tpts;
    tpts.reserve(pts.size());
    for (const QVec& p : pts) tpts.push_back(chart.to_chart(p));

    auto key_of = [](const ChartIneq& f) {
        QVec joint = f.a;
        joint.push_back(f.c);
        return qvec_key(joint);
    };

    struct Node {
        ChartIneq rep;
        PermRefs stab;
    };
    std::unordered_set<std::string> known;
    std::vector<Node> nodes;
    std::deque<std::size_t> queue;

    auto try_insert = [&](const ChartIneq& f) {
        const std::string self = key_of(f);
        if (known.count(self)) return;
        auto [normal, offset] = chart.push_inequality(f.a, f.c);
        Node node;
        node.rep = f;
        for (const auto* perm : perms) {
            QVec pn(normal.size());
            for (std::size_t i = 0; i < pn.size(); ++i) pn[(*perm)[i]] = normal[i];
            auto [a, c] = chart.pull_inequality(pn, offset);
            ChartIneq img = normalize_chart_ineq(std::move(a), std::move(c));
            std::string ik = key_of(img);
            if (ik == self) node.stab.push_back(perm);
            known.insert(std::move(ik));
        }
        nodes.push_back(std::move(node));
        queue.push_back(nodes.size() - 1);
    };

    try_insert(initial_facet(tpts, k));
    while (!queue.empty()) {
        const Node node = nodes[queue.front()];
        queue.pop_front();
        const std::vector<Rational> slack = ineq_slacks(tpts, node.rep);
        QMat face;
        for (std::size_t i = 0; i < tpts.size(); ++i)
            if (slack[i] == 0) face.push_back(pts[i]);
        const QMat ridges = facet_orbit_reps(face, node.stab, depth + 1);
        for (const QVec& row : ridges) {
            auto [u, u0] = chart.pull_inequality(QVec(row.begin(), row.end() - 1), row.back());
            try_insert(rotate_off(tpts, node.rep, slack, u, u0));
        }
    }

    QMat out;
    out.reserve(nodes.size());
    for (const Node& node : nodes) {
        auto [normal, offset] = chart.push_inequality(node.rep.a, node.rep.c);
        normal.push_back(std::move(offset));
        out.push_back(normalize_inequality_row(std::move(normal)));
    }
    return out;
}

} // namespace detail

/// Facet enumeration by orbit decomposition: one representative facet per
/// relabeling orbit is found by walking the facet-ridge graph, and each orbit
/// is then expanded through the group into explicit rows. The double
/// description subproblems stay at the size of single facets, which keeps
/// heavily degenerate polytopes tractable where direct enumeration stalls.
/// The group must stabilize the hull (checked on generators against the point
/// set); at least one point is required as in facets_from_vrep.
inline FacetOrbitReport facets_orbitwise(const VRep& v, const RelabelingGroup& grp) {
    const Scenario& s = grp.scenario;
    if (v.dim != s.dim())
        throw ScenarioMismatchError("point dimension does not match the group's scenario");
    if (v.points.empty()) throw EmptyPolytopeError("facet enumeration of an empty point set");
    QMat pts = v.points;
    sort_dedup_points(pts);

    FacetOrbitReport out;
    out.hrep.dim = v.dim;
    const AffineChart chart = affine_hull(pts);
    out.hrep.eqs = hull_equalities(chart);
    if (chart.dim() == 0) return out;

    {
        std::unordered_set<std::string> point_keys;
        for (const QVec& p : pts) point_keys.insert(qvec_key(p));
        for (const Relabeling& g : relabeling_generators(s, grp.with_party_swap)) {
            const std::vector<int> perm = index_permutation(s, g);
            for (const QVec& p : pts) {
                QVec img(v.dim);
                for (int i = 0; i < v.dim; ++i) img[perm[i]] = p[i];
                if (!point_keys.count(qvec_key(img)))
                    throw ScenarioMismatchError("relabeling group does not stabilize the point set");
            }
        }
    }

    detail::PermRefs all;
    all.reserve(grp.perms.size());
    for (const auto& perm : grp.perms) all.push_back(&perm);
    const QMat reps = detail::facet_orbit_reps(pts, all, 0);

    // Orbit accounting over the representatives (the direct-enumeration
    // fallback may deliver several per orbit). Images are deduplicated by
    // gauge-reduced key; pulling the permuted normal back through the chart
    // restores the gauge facets_from_vrep emits, so row lists are comparable.
    const CollinsGisin cg(s);
    std::unordered_set<std::string> seen;
    for (const QVec& row : reps) {
        const QVec normal(row.begin(), row.end() - 1);
        const Rational offset = row.back();
        if (seen.count(detail::zvec_key(reduced_integer_key(cg, normal, offset)))) continue;
        std::map<std::string, int> images;
        ZVec canonical_key;
        for (std::size_t gi = 0; gi < grp.perms.size(); ++gi) {
            ZVec img = detail::permute_reduce_key(cg, grp.perms[gi], normal, offset);
            if (canonical_key.empty() || lex_compare(img, canonical_key) < 0) canonical_key = img;
            std::string ik = detail::zvec_key(img);
            auto [it, fresh] = images.try_emplace(std::move(ik), static_cast<int>(gi));
            if (fresh) seen.insert(it->first);
        }
        for (const auto& [key, gi] : images) {
            const std::vector<int>& perm = grp.perms[gi];
            QVec pn(normal.size());
            for (std::size_t i = 0; i < perm.size(); ++i) pn[perm[i]] = normal[i];
            auto [a, c] = chart.pull_inequality(pn, offset);
            auto [back_n, back_c] = chart.push_inequality(a, c);
            back_n.push_back(std::move(back_c));
            out.hrep.ineqs.push_back(normalize_inequality_row(std::move(back_n)));
        }
        QVec coeff(canonical_key.begin(), canonical_key.end() - 1);
        out.orbits.push_back(Orbit{BellFunctional(s, std::move(coeff),
                                                  Rational(canonical_key.back()),
                                                  BoundKind::nary, 0),
                                   static_cast<int>(images.size())});
    }
    sort_rows(out.hrep.ineqs);
    dedup_sorted_rows(out.hrep.ineqs);
    std::sort(out.orbits.begin(), out.orbits.end(), [](const Orbit& x, const Orbit& y) {
        QVec jx = x.canonical.coeff, jy = y.canonical.coeff;
        jx.push_back(x.canonical.bound);
        jy.push_back(y.canonical.bound);
        return lex_compare(jx, jy) < 0;
    });
    return out;
}

inline FacetOrbitReport facets_orbitwise(const VRep& v, const Scenario& s,
                                         bool include_party_swap = true) {
    return facets_orbitwise(v, relabeling_group(s, include_party_swap));
}

} // namespace bellkit
