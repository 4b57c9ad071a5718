#pragma once

#include <string>
#include <vector>

#include "bellkit/collins_gisin.hpp"
#include "bellkit/correlation.hpp"
#include "bellkit/rational.hpp"
#include "bellkit/scenario.hpp"

namespace bellkit {

/// What the attached bound means for a Bell functional.
enum class BoundKind {
    binary,        // bound over models built from two-outcome sources
    nary,          // bound over models built from arity-limited sources
    nonsignaling,  // bound over the full no-signaling polytope
};

inline std::string bound_kind_str(BoundKind k) {
    switch (k) {
        case BoundKind::binary: return "binary";
        case BoundKind::nary: return "nary";
        case BoundKind::nonsignaling: return "nonsignaling";
    }
    return "?";
}

inline BoundKind bound_kind_from_str(const std::string& s) {
    if (s == "binary") return BoundKind::binary;
    if (s == "nary") return BoundKind::nary;
    if (s == "nonsignaling") return BoundKind::nonsignaling;
    throw ParseError("unknown bound kind: " + s);
}

/// Linear functional on correlation tables together with the bound it is
/// claimed to satisfy. Coefficients use the same flat (x, y, a, b) layout as
/// tables. `arity` is the source arity the bound refers to (2 for binary).
struct BellFunctional {
    Scenario scenario;
    QVec coeff;
    Rational bound;
    BoundKind kind = BoundKind::binary;
    int arity = 2;

    BellFunctional(Scenario s, QVec c, Rational b, BoundKind k, int ar = 2)
        : scenario(std::move(s)), coeff(std::move(c)), bound(std::move(b)), kind(k), arity(ar) {
        if (static_cast<int>(coeff.size()) != scenario.dim())
            throw ScenarioMismatchError("functional coefficient length mismatch");
    }
};

inline Rational evaluate(const BellFunctional& f, const CorrelationVector& t) {
    if (f.scenario != t.scenario)
        throw ScenarioMismatchError("functional and table live on different scenarios");
    return dot(f.coeff, t.values);
}

inline double evaluate(const BellFunctional& f, const CorrelationTableD& t) {
    if (f.scenario != t.scenario)
        throw ScenarioMismatchError("functional and table live on different scenarios");
    double s = 0.0;
    for (std::size_t i = 0; i < t.values.size(); ++i)
        s += static_cast<double>(f.coeff[i]) * t.values[i];
    return s;
}

/// Canonical representative of a functional modulo the gauge freedom of adding
/// normalization and no-signaling identities. The coefficient table is pulled
/// onto the Collins-Gisin chart and re-expanded with the fixed rule: Alice
/// marginal terms become sums over Bob's setting 0, Bob marginal terms sums
/// over Alice's setting 0. The constant picked up on the chart moves into the
/// bound. Two functionals agree on all no-signaling tables iff their reduced
/// forms are identical.
struct ReducedFunctional {
    QVec coeff;      // canonical expansion, full-table layout
    Rational bound;  // adjusted bound
};

inline ReducedFunctional reduce_functional(const CollinsGisin& cg, const QVec& coeff,
                                           const Rational& bound) {
    const Scenario& s = cg.scenario();
    QVec phi(cg.dim(), Rational(0));
    Rational constant(0);
    // f . x on the hull = f . origin + sum_j (f . basis_j) t_j. Exploit the
    // chart structure instead of materializing basis vectors: coefficient of
    // t_j aggregates the full-table coefficients the reconstruction routes
    // through coordinate j.
    for (int x = 0; x < s.alice_settings(); ++x) {
        const int la = s.alice_outcomes(x) - 1;
        for (int y = 0; y < s.bob_settings(); ++y) {
            const int lb = s.bob_outcomes(y) - 1;
            constant += coeff[s.index(x, y, la, lb)];
            for (int a = 0; a < la; ++a) {
                const Rational d = coeff[s.index(x, y, a, lb)] - coeff[s.index(x, y, la, lb)];
                phi[cg.alice_index(x, a)] += d;
            }
            for (int b = 0; b < lb; ++b) {
                const Rational d = coeff[s.index(x, y, la, b)] - coeff[s.index(x, y, la, lb)];
                phi[cg.bob_index(y, b)] += d;
            }
            for (int a = 0; a < la; ++a)
                for (int b = 0; b < lb; ++b)
                    phi[cg.joint_index(x, y, a, b)] +=
                        coeff[s.index(x, y, a, b)] - coeff[s.index(x, y, a, lb)] -
                        coeff[s.index(x, y, la, b)] + coeff[s.index(x, y, la, lb)];
        }
    }
    ReducedFunctional out;
    out.bound = bound - constant;
    out.coeff.assign(s.dim(), Rational(0));
    for (int x = 0; x < s.alice_settings(); ++x)
        for (int a = 0; a + 1 < s.alice_outcomes(x); ++a) {
            const Rational& c = phi[cg.alice_index(x, a)];
            if (c == 0) continue;
            for (int b = 0; b < s.bob_outcomes(0); ++b) out.coeff[s.index(x, 0, a, b)] += c;
        }
    for (int y = 0; y < s.bob_settings(); ++y)
        for (int b = 0; b + 1 < s.bob_outcomes(y); ++b) {
            const Rational& c = phi[cg.bob_index(y, b)];
            if (c == 0) continue;
            for (int a = 0; a < s.alice_outcomes(0); ++a) out.coeff[s.index(0, y, a, b)] += c;
        }
    for (int x = 0; x < s.alice_settings(); ++x)
        for (int y = 0; y < s.bob_settings(); ++y)
            for (int a = 0; a + 1 < s.alice_outcomes(x); ++a)
                for (int b = 0; b + 1 < s.bob_outcomes(y); ++b)
                    out.coeff[s.index(x, y, a, b)] += phi[cg.joint_index(x, y, a, b)];
    return out;
}

/// Reduced form scaled to a primitive integer vector (coefficients then bound),
/// the library's hashable key for "same functional up to gauge and positive
/// scaling".
inline ZVec reduced_integer_key(const CollinsGisin& cg, const QVec& coeff, const Rational& bound) {
    ReducedFunctional r = reduce_functional(cg, coeff, bound);
    QVec joint(std::move(r.coeff));
    joint.push_back(r.bound);
    return to_primitive_integer(joint);
}

} // namespace bellkit
