#pragma once

#include <vector>

#include "bellkit/functional.hpp"
#include "bellkit/hull.hpp"
#include "bellkit/scenario.hpp"
#include "bellkit/simplex.hpp"
#include "bellkit/wiring.hpp"

namespace bellkit {

/// Scenario hosting the n-outcome chained functional: Alice chooses between a
/// binary and an n-outcome measurement, Bob between n binary ones.
inline Scenario ibn_scenario(int n) {
    if (n < 3) throw InvalidScenarioError("the chained functional needs n of at least 3");
    return Scenario({2, n}, std::vector<int>(n, 2));
}

/// Diagonal functional on two three-outcome measurements per party. Only the
/// first two outcomes enter, with alternating signs over outcome and both
/// settings; the bound 1 holds for correlations produced by binary boxes.
inline BellFunctional build_Ia() {
    const Scenario s = Scenario::parse("[3,3|3,3]");
    QVec c(s.dim(), Rational(0));
    for (int k = 0; k < 2; ++k)
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                c[s.index(x, y, k, k)] = ((k + x + y) % 2 == 0) ? 1 : -1;
    return BellFunctional(s, std::move(c), Rational(1), BoundKind::binary, 2);
}

/// Chained functional with an Alice marginal term, expanded against Bob's
/// setting 0:
///   -sum_b P(0,b|0,0) + sum_k [ P(0,0|0,k) - P(k,0|1,k) ].
/// The bound n-2 holds for (n-1)-ary correlations and is reached by the
/// deterministic point with all outcomes 0.
inline BellFunctional build_Ibn(int n) {
    const Scenario s = ibn_scenario(n);
    QVec c(s.dim(), Rational(0));
    for (int b = 0; b < 2; ++b) c[s.index(0, 0, 0, b)] -= 1;
    for (int k = 0; k < n; ++k) {
        c[s.index(0, k, 0, 0)] += 1;
        c[s.index(1, k, k, 0)] -= 1;
    }
    return BellFunctional(s, std::move(c), Rational(n - 2), BoundKind::nary, n - 1);
}

/// Three binary measurements per party; eight signed terms. The bound 0 holds
/// when for each party at least two of the three measurements arise from a
/// common four-outcome box.
inline BellFunctional build_Ic() {
    const Scenario s = Scenario::parse("[2,2,2|2,2,2]");
    QVec c(s.dim(), Rational(0));
    const int minus[7][4] = {{1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}, {0, 0, 1, 1},
                             {1, 0, 1, 2}, {0, 1, 2, 0}, {0, 1, 2, 1}};
    for (const auto& t : minus) c[s.index(t[2], t[3], t[0], t[1])] = -1;
    c[s.index(2, 2, 0, 0)] = 1;
    return BellFunctional(s, std::move(c), Rational(0), BoundKind::nary, 4);
}

/// Exact integer table over the formal basis R_{a,b|x,y} in which the dual
/// combination for the chained functional is accumulated. Writes are bounds
/// checked so that any term falling outside the basis surfaces immediately
/// instead of corrupting a neighbouring coefficient.
class CertificateWorkspace {
  public:
    CertificateWorkspace(int n, int dropped)
        : n_(n), dropped_(dropped), scenario_(ibn_scenario(n)),
          table_(scenario_.dim(), Int(0)) {
        if (dropped < 0 || dropped >= n)
            throw CertificateError("dropped outcome index out of range");
    }

    int n() const { return n_; }
    int dropped() const { return dropped_; }
    const Scenario& scenario() const { return scenario_; }
    const ZVec& table() const { return table_; }

    void add(int a, int b, int x, int y, const Int& delta) {
        if (x < 0 || x >= scenario_.alice_settings() || y < 0 || y >= scenario_.bob_settings() ||
            a < 0 || a >= scenario_.alice_outcomes(x) || b < 0 || b >= scenario_.bob_outcomes(y))
            throw CertificateError("certificate term falls outside the formal basis");
        table_[scenario_.index(x, y, a, b)] += delta;
    }

    Int max_coefficient() const {
        Int best = table_[0];
        for (const Int& v : table_)
            if (v > best) best = v;
        return best;
    }

  private:
    int n_;
    int dropped_;
    Scenario scenario_;
    ZVec table_;
};

struct NaryCertificate {
    int n;
    std::vector<ZVec> zeta; // one table per dropped outcome, flat scenario layout
    Int max_zeta;           // common maximum across all dropped outcomes
};

/// Builds the dual combination
///   2n F - sum_tau xi_tau X_tau - sum_{b,y} eta R_{l,b|1,y}
/// in the formal basis for every dropped outcome l, where
///   F        = -sum_b R_{0,b|0,l} + sum_k [ R_{0,0|0,k} - R_{k,0|1,k} ],
///   X_{1;a|x,y} = sum_b ( R_{a,b|x,y} - R_{a,b|x,l} ),
///   X_{2;b|x,y} = sum_a ( R_{a,b|x,y} - R_{a,b|0,y} ),
/// with eta identically 2n and the only nonzero xi being
///   xi_{1;a|0,k} = 4,  xi_{1;k|1,k} = -2n,
///   xi_{2;b|1,l} = -3n+2,  xi_{2;b|1,k} = -(-1)^b n + 2   (k != l).
/// Every linear functional vanishing on the X_tau and on the dropped Alice
/// outcome, nonnegative on the basis and normalized to total mass 2n, is then
/// bounded by the largest accumulated coefficient, which this returns. It
/// must come out as n-2 independently of the dropped outcome; a disagreement
/// between dropped outcomes is reported as a certificate error.
inline NaryCertificate nary_certificate(int n) {
    const Int two_n = 2 * n;
    NaryCertificate cert;
    cert.n = n;
    for (int l = 0; l < n; ++l) {
        CertificateWorkspace ws(n, l);
        // 2n F
        for (int b = 0; b < 2; ++b) ws.add(0, b, 0, l, -two_n);
        for (int k = 0; k < n; ++k) {
            ws.add(0, 0, 0, k, two_n);
            ws.add(k, 0, 1, k, -two_n);
        }
        for (int k = 0; k < n; ++k) {
            if (k == l) continue; // X vectors indexed by l vanish identically
            // xi_{1;a|0,k} = 4
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    ws.add(a, b, 0, k, -4);
                    ws.add(a, b, 0, l, 4);
                }
            // xi_{1;k|1,k} = -2n
            for (int b = 0; b < 2; ++b) {
                ws.add(k, b, 1, k, two_n);
                ws.add(k, b, 1, l, -two_n);
            }
            // xi_{2;b|1,k} = -(-1)^b n + 2
            for (int b = 0; b < 2; ++b) {
                const Int xi = (b == 0 ? Int(-n + 2) : Int(n + 2));
                for (int a = 0; a < n; ++a) ws.add(a, b, 1, k, -xi);
                for (int a = 0; a < 2; ++a) ws.add(a, b, 0, k, xi);
            }
        }
        // xi_{2;b|1,l} = -3n+2
        for (int b = 0; b < 2; ++b) {
            const Int xi = Int(-3 * n + 2);
            for (int a = 0; a < n; ++a) ws.add(a, b, 1, l, -xi);
            for (int a = 0; a < 2; ++a) ws.add(a, b, 0, l, xi);
        }
        // eta = 2n on the dropped Alice outcome of the n-outcome setting
        for (int y = 0; y < n; ++y)
            for (int b = 0; b < 2; ++b) ws.add(l, b, 1, y, -two_n);

        const Int m = ws.max_coefficient();
        if (l == 0)
            cert.max_zeta = m;
        else if (m != cert.max_zeta)
            throw CertificateError("certificate maximum depends on the dropped outcome");
        cert.zeta.push_back(ws.table());
    }
    return cert;
}

inline Int verify_nary_certificate(int n) { return nary_certificate(n).max_zeta; }

/// Direct primal counterpart of the certificate: the exact maximum of the
/// chained functional over the hull of (n-1)-ary supported vertices. Cost
/// grows quickly with n; meant for small n as an independent cross-check.
inline Rational nary_bound_by_lp(int n, int threads = 1) {
    const BellFunctional f = build_Ibn(n);
    const VRep verts = nary_support_vertices(f.scenario, n - 1, threads);
    const LpSolution sol = lp_max(f.coeff, verts);
    if (sol.status != LpStatus::optimal)
        throw EmptyPolytopeError("no supported vertices to maximize over");
    return sol.value;
}

} // namespace bellkit
