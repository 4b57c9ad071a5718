#pragma once

#include <vector>

#include "bellkit/correlation.hpp"
#include "bellkit/linalg.hpp"
#include "bellkit/polytope.hpp"
#include "bellkit/scenario.hpp"

namespace bellkit {

/// Index bookkeeping for the Collins-Gisin coordinates of a scenario: one
/// Alice-marginal coordinate per (x, a) with a below the last outcome, one
/// Bob-marginal coordinate per (y, b) likewise, then one joint coordinate per
/// (x, y, a, b) with both outcomes truncated. Normalization and no-signaling
/// hold identically in these coordinates, which is what makes them the natural
/// chart for the no-signaling polytope.
class CollinsGisin {
public:
    explicit CollinsGisin(Scenario s) : scenario_(std::move(s)) {
        const Scenario& sc = scenario_;
        alice_off_.resize(sc.alice_settings());
        int off = 0;
        for (int x = 0; x < sc.alice_settings(); ++x) {
            alice_off_[x] = off;
            off += sc.alice_outcomes(x) - 1;
        }
        bob_base_ = off;
        bob_off_.resize(sc.bob_settings());
        for (int y = 0; y < sc.bob_settings(); ++y) {
            bob_off_[y] = off;
            off += sc.bob_outcomes(y) - 1;
        }
        joint_base_ = off;
        joint_off_.resize(sc.alice_settings() * sc.bob_settings());
        for (int x = 0; x < sc.alice_settings(); ++x)
            for (int y = 0; y < sc.bob_settings(); ++y) {
                joint_off_[x * sc.bob_settings() + y] = off;
                off += (sc.alice_outcomes(x) - 1) * (sc.bob_outcomes(y) - 1);
            }
        dim_ = off;
    }

    const Scenario& scenario() const { return scenario_; }
    int dim() const { return dim_; }

    int alice_index(int x, int a) const { return alice_off_[x] + a; }
    int bob_index(int y, int b) const { return bob_off_[y] + b; }
    int joint_index(int x, int y, int a, int b) const {
        return joint_off_[x * scenario_.bob_settings() + y] +
               a * (scenario_.bob_outcomes(y) - 1) + b;
    }

    /// Linear read-off of the chart coordinates from a full table. Marginals
    /// are taken against the other party's setting 0, which is the canonical
    /// expansion choice used throughout; on no-signaling tables any other
    /// choice gives the same value.
    QVec from_table(const CorrelationVector& t) const {
        const Scenario& sc = scenario_;
        QVec out(dim_, Rational(0));
        for (int x = 0; x < sc.alice_settings(); ++x)
            for (int a = 0; a + 1 < sc.alice_outcomes(x); ++a)
                out[alice_index(x, a)] = t.alice_marginal(a, x, 0);
        for (int y = 0; y < sc.bob_settings(); ++y)
            for (int b = 0; b + 1 < sc.bob_outcomes(y); ++b)
                out[bob_index(y, b)] = t.bob_marginal(b, y, 0);
        for (int x = 0; x < sc.alice_settings(); ++x)
            for (int y = 0; y < sc.bob_settings(); ++y)
                for (int a = 0; a + 1 < sc.alice_outcomes(x); ++a)
                    for (int b = 0; b + 1 < sc.bob_outcomes(y); ++b)
                        out[joint_index(x, y, a, b)] = t.p(x, y, a, b);
        return out;
    }

    /// Affine reconstruction of the full table from chart coordinates. Inverse
    /// of from_table on (and only on) the no-signaling affine hull.
    CorrelationVector to_table(const QVec& t) const {
        const Scenario& sc = scenario_;
        CorrelationVector out(sc);
        for (int x = 0; x < sc.alice_settings(); ++x) {
            const int la = sc.alice_outcomes(x) - 1;
            for (int y = 0; y < sc.bob_settings(); ++y) {
                const int lb = sc.bob_outcomes(y) - 1;
                Rational corner(1);
                for (int a = 0; a < la; ++a) {
                    Rational row = t[alice_index(x, a)];
                    corner -= row;
                    for (int b = 0; b < lb; ++b) {
                        const Rational& j = t[joint_index(x, y, a, b)];
                        out.p(x, y, a, b) = j;
                        row -= j;
                        corner += j;
                    }
                    out.p(x, y, a, lb) = row;
                }
                for (int b = 0; b < lb; ++b) {
                    Rational col = t[bob_index(y, b)];
                    corner -= col;
                    for (int a = 0; a < la; ++a) col -= t[joint_index(x, y, a, b)];
                    out.p(x, y, la, b) = col;
                }
                out.p(x, y, la, lb) = corner;
            }
        }
        return out;
    }

    /// The chart as linear-algebra data: origin plus basis/readback pairs.
    AffineChart chart() const {
        const Scenario& sc = scenario_;
        AffineChart c;
        {
            CorrelationVector origin(sc);
            for (int x = 0; x < sc.alice_settings(); ++x)
                for (int y = 0; y < sc.bob_settings(); ++y)
                    origin.p(x, y, sc.alice_outcomes(x) - 1, sc.bob_outcomes(y) - 1) = 1;
            c.origin = origin.values;
        }
        c.basis.reserve(dim_);
        c.readback.reserve(dim_);
        for (int j = 0; j < dim_; ++j) {
            QVec t(dim_, Rational(0));
            t[j] = 1;
            QVec col = to_table(t).values;
            for (std::size_t i = 0; i < col.size(); ++i) col[i] -= c.origin[i];
            c.basis.push_back(std::move(col));
        }
        for (int x = 0; x < sc.alice_settings(); ++x)
            for (int a = 0; a + 1 < sc.alice_outcomes(x); ++a) {
                QVec rb(sc.dim(), Rational(0));
                for (int b = 0; b < sc.bob_outcomes(0); ++b) rb[sc.index(x, 0, a, b)] = 1;
                c.readback.push_back(std::move(rb));
            }
        for (int y = 0; y < sc.bob_settings(); ++y)
            for (int b = 0; b + 1 < sc.bob_outcomes(y); ++b) {
                QVec rb(sc.dim(), Rational(0));
                for (int a = 0; a < sc.alice_outcomes(0); ++a) rb[sc.index(0, y, a, b)] = 1;
                c.readback.push_back(std::move(rb));
            }
        for (int x = 0; x < sc.alice_settings(); ++x)
            for (int y = 0; y < sc.bob_settings(); ++y)
                for (int a = 0; a + 1 < sc.alice_outcomes(x); ++a)
                    for (int b = 0; b + 1 < sc.bob_outcomes(y); ++b) {
                        QVec rb(sc.dim(), Rational(0));
                        rb[sc.index(x, y, a, b)] = 1;
                        c.readback.push_back(std::move(rb));
                    }
        return c;
    }

    /// H-representation of the no-signaling polytope in chart coordinates:
    /// nonnegativity of every reconstructed table entry. Full-dimensional, no
    /// equality rows.
    HRep hrep() const {
        const Scenario& sc = scenario_;
        HRep h;
        h.dim = dim_;
        // One row per full-table entry, -P(a,b|x,y) <= rhs, with coefficients
        // taken from the same case analysis as to_table.
        for (int x = 0; x < sc.alice_settings(); ++x) {
            const int la = sc.alice_outcomes(x) - 1;
            for (int y = 0; y < sc.bob_settings(); ++y) {
                const int lb = sc.bob_outcomes(y) - 1;
                for (int a = 0; a <= la; ++a) {
                    for (int b = 0; b <= lb; ++b) {
                        QVec row(dim_ + 1, Rational(0));
                        Rational rhs(0);
                        auto add = [&row](int idx, int v) { row[idx] += v; };
                        if (a < la && b < lb) {
                            add(joint_index(x, y, a, b), -1);
                        } else if (a < la) {
                            add(alice_index(x, a), -1);
                            for (int bb = 0; bb < lb; ++bb) add(joint_index(x, y, a, bb), 1);
                        } else if (b < lb) {
                            add(bob_index(y, b), -1);
                            for (int aa = 0; aa < la; ++aa) add(joint_index(x, y, aa, b), 1);
                        } else {
                            rhs = 1;
                            for (int aa = 0; aa < la; ++aa) add(alice_index(x, aa), 1);
                            for (int bb = 0; bb < lb; ++bb) add(bob_index(y, bb), 1);
                            for (int aa = 0; aa < la; ++aa)
                                for (int bb = 0; bb < lb; ++bb) add(joint_index(x, y, aa, bb), -1);
                        }
                        row[dim_] = rhs;
                        h.ineqs.push_back(normalize_inequality_row(std::move(row)));
                    }
                }
            }
        }
        sort_rows(h.ineqs);
        dedup_sorted_rows(h.ineqs);
        return h;
    }

private:
    Scenario scenario_;
    std::vector<int> alice_off_, bob_off_, joint_off_;
    int bob_base_ = 0, joint_base_ = 0, dim_ = 0;
};

inline int collins_gisin_dim(const Scenario& s) { return CollinsGisin(s).dim(); }

/// H-representation of the no-signaling polytope in full table coordinates:
/// nonnegativity of each entry, per-block normalization, and marginal
/// equalities tying every block to the reference settings.
inline HRep ns_hrep(const Scenario& s) {
    HRep h;
    h.dim = s.dim();
    for (int i = 0; i < s.dim(); ++i) {
        QVec row(s.dim() + 1, Rational(0));
        row[i] = -1;
        h.ineqs.push_back(std::move(row));
    }
    for (int x = 0; x < s.alice_settings(); ++x)
        for (int y = 0; y < s.bob_settings(); ++y) {
            QVec row(s.dim() + 1, Rational(0));
            for (int a = 0; a < s.alice_outcomes(x); ++a)
                for (int b = 0; b < s.bob_outcomes(y); ++b) row[s.index(x, y, a, b)] = 1;
            row[s.dim()] = 1;
            h.eqs.push_back(normalize_equality_row(std::move(row)));
        }
    for (int x = 0; x < s.alice_settings(); ++x)
        for (int a = 0; a < s.alice_outcomes(x); ++a)
            for (int y = 1; y < s.bob_settings(); ++y) {
                QVec row(s.dim() + 1, Rational(0));
                for (int b = 0; b < s.bob_outcomes(y); ++b) row[s.index(x, y, a, b)] += 1;
                for (int b = 0; b < s.bob_outcomes(0); ++b) row[s.index(x, 0, a, b)] -= 1;
                h.eqs.push_back(normalize_equality_row(std::move(row)));
            }
    for (int y = 0; y < s.bob_settings(); ++y)
        for (int b = 0; b < s.bob_outcomes(y); ++b)
            for (int x = 1; x < s.alice_settings(); ++x) {
                QVec row(s.dim() + 1, Rational(0));
                for (int a = 0; a < s.alice_outcomes(x); ++a) row[s.index(x, y, a, b)] += 1;
                for (int a = 0; a < s.alice_outcomes(0); ++a) row[s.index(0, y, a, b)] -= 1;
                h.eqs.push_back(normalize_equality_row(std::move(row)));
            }
    sort_rows(h.eqs);
    dedup_sorted_rows(h.eqs);
    return h;
}

} // namespace bellkit
