#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "bellkit/linalg.hpp"
#include "bellkit/polytope.hpp"
#include "bellkit/rational.hpp"

namespace bellkit {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    Rational value;
    QVec x; // meaningful only when status == optimal
};

namespace detail {

/// Two-phase primal simplex on the standard form
///     maximize c.z   subject to   A z = b,  z >= 0,
/// exact over the rationals, Bland's pivot rule throughout (no cycling).
class Simplex {
public:
    Simplex(QMat a, QVec b) : a_(std::move(a)), b_(std::move(b)) {
        m_ = static_cast<int>(a_.size());
        n_ = m_ ? static_cast<int>(a_[0].size()) : 0;
    }

    LpStatus maximize(const QVec& c, QVec& x_out, Rational& value_out) {
        // Phase 1: append one artificial column per row and drive their sum
        // to zero. Rows are flipped so b >= 0 and the artificial block is an
        // identity, i.e. already a feasible canonical basis.
        for (int r = 0; r < m_; ++r) {
            if (b_[r] < 0) {
                for (Rational& v : a_[r]) v = -v;
                b_[r] = -b_[r];
            }
            a_[r].resize(n_ + m_, Rational(0));
            a_[r][n_ + r] = 1;
        }
        basis_.resize(m_);
        for (int r = 0; r < m_; ++r) basis_[r] = n_ + r;
        width_ = n_ + m_;
        QVec phase1(width_, Rational(0));
        for (int j = n_; j < width_; ++j) phase1[j] = -1;
        price(phase1);
        if (iterate() != LpStatus::optimal) throw Error("phase 1 cannot be unbounded");
        if (zval_ != 0) return LpStatus::infeasible;

        // Pivot leftover artificials out of the basis; rows that cannot be
        // pivoted are identically zero on the real columns and get dropped.
        for (int r = static_cast<int>(basis_.size()) - 1; r >= 0; --r) {
            if (basis_[r] < n_) continue;
            int enter = -1;
            for (int j = 0; j < n_; ++j) {
                if (a_[r][j] != 0) {
                    enter = j;
                    break;
                }
            }
            if (enter >= 0) {
                pivot(r, enter);
            } else {
                a_.erase(a_.begin() + r);
                b_.erase(b_.begin() + r);
                basis_.erase(basis_.begin() + r);
                m_ = static_cast<int>(a_.size());
            }
        }
        m_ = static_cast<int>(a_.size());
        for (QVec& row : a_) row.resize(n_);
        width_ = n_;

        price(c);
        const LpStatus st = iterate();
        if (st != LpStatus::optimal) return st;
        x_out.assign(n_, Rational(0));
        for (int r = 0; r < m_; ++r) x_out[basis_[r]] = b_[r];
        value_out = zval_;
        return LpStatus::optimal;
    }

private:
    void price(const QVec& c) {
        zrow_ = c;
        zval_ = 0;
        for (int r = 0; r < m_; ++r) {
            const Rational& cb = c[basis_[r]];
            if (cb == 0) continue;
            zval_ += cb * b_[r];
            for (int j = 0; j < width_; ++j)
                if (a_[r][j] != 0) zrow_[j] -= cb * a_[r][j];
        }
    }

    LpStatus iterate() {
        for (;;) {
            int enter = -1;
            for (int j = 0; j < width_; ++j) {
                if (zrow_[j] > 0) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return LpStatus::optimal;
            int leave = -1;
            Rational best;
            for (int r = 0; r < m_; ++r) {
                if (a_[r][enter] <= 0) continue;
                const Rational ratio = b_[r] / a_[r][enter];
                if (leave < 0 || ratio < best ||
                    (ratio == best && basis_[r] < basis_[leave])) {
                    leave = r;
                    best = ratio;
                }
            }
            if (leave < 0) return LpStatus::unbounded;
            pivot(leave, enter);
        }
    }

    void pivot(int r, int c) {
        const Rational inv = Rational(1) / a_[r][c];
        if (inv != 1) {
            for (Rational& v : a_[r]) v *= inv;
            b_[r] *= inv;
        }
        for (int i = 0; i < m_; ++i) {
            if (i == r || a_[i][c] == 0) continue;
            const Rational f = a_[i][c];
            for (int j = 0; j < width_; ++j)
                if (a_[r][j] != 0) a_[i][j] -= f * a_[r][j];
            b_[i] -= f * b_[r];
        }
        if (zrow_[c] != 0) {
            const Rational f = zrow_[c];
            for (int j = 0; j < width_; ++j)
                if (a_[r][j] != 0) zrow_[j] -= f * a_[r][j];
            zval_ += f * b_[r];
        }
        basis_[r] = c;
    }

    QMat a_;
    QVec b_;
    QVec zrow_;
    Rational zval_;
    std::vector<int> basis_;
    int m_ = 0, n_ = 0, width_ = 0;
};

} // namespace detail

/// Solves the equality system given as rows (c..., rhs), returning a chart of
/// its solution set, or nullopt when inconsistent. With no rows the chart is
/// the identity on the ambient space.
inline std::optional<AffineChart> chart_from_equalities(QMat eq_rows, int dim) {
    if (eq_rows.empty()) return AffineChart::identity(dim);
    std::vector<int> pivot_cols;
    const int r = rref_in_place(eq_rows, pivot_cols, dim);
    for (const QVec& row : eq_rows) {
        bool zero = true;
        for (int j = 0; j < dim; ++j)
            if (row[j] != 0) {
                zero = false;
                break;
            }
        if (zero && row[dim] != 0) return std::nullopt;
    }
    AffineChart chart;
    chart.origin.assign(dim, Rational(0));
    for (int i = 0; i < r; ++i) chart.origin[pivot_cols[i]] = eq_rows[i][dim];
    std::vector<bool> is_pivot(dim, false);
    for (int c : pivot_cols) is_pivot[c] = true;
    for (int free = 0; free < dim; ++free) {
        if (is_pivot[free]) continue;
        QVec v(dim, Rational(0));
        v[free] = 1;
        for (int i = 0; i < r; ++i) v[pivot_cols[i]] = -eq_rows[i][free];
        chart.basis.push_back(std::move(v));
        QVec rb(dim, Rational(0));
        rb[free] = 1;
        chart.readback.push_back(std::move(rb));
    }
    return chart;
}

/// Exact maximum of objective.x over { x : h }. Equalities are eliminated
/// first; the reduced problem runs through the simplex with free variables
/// split into positive parts.
inline LpSolution lp_max(const QVec& objective, const HRep& h) {
    if (static_cast<int>(objective.size()) != h.dim)
        throw ScenarioMismatchError("objective dimension does not match H-representation");
    auto chart_opt = chart_from_equalities(h.eqs, h.dim);
    if (!chart_opt) return {LpStatus::infeasible, Rational(0), {}};
    const AffineChart& chart = *chart_opt;
    const int k = chart.dim();

    QMat rows; // reduced inequalities (g..., rhs) in chart coordinates
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
            if (hp < 0) return {LpStatus::infeasible, Rational(0), {}};
            continue;
        }
        gp.push_back(hp);
        rows.push_back(std::move(gp));
    }

    QVec obj_chart(k);
    for (int j = 0; j < k; ++j) obj_chart[j] = dot(objective, chart.basis[j]);
    const Rational constant = dot(objective, chart.origin);

    if (k == 0) {
        return {LpStatus::optimal, constant, chart.origin};
    }

    // Standard form: t = u - w with u, w >= 0, one slack per inequality.
    const int m = static_cast<int>(rows.size());
    QMat a(m, QVec(2 * k + m, Rational(0)));
    QVec b(m);
    for (int r = 0; r < m; ++r) {
        for (int j = 0; j < k; ++j) {
            a[r][j] = rows[r][j];
            a[r][k + j] = -rows[r][j];
        }
        a[r][2 * k + r] = 1;
        b[r] = rows[r][k];
    }
    QVec c(2 * k + m, Rational(0));
    for (int j = 0; j < k; ++j) {
        c[j] = obj_chart[j];
        c[k + j] = -obj_chart[j];
    }
    if (m == 0) {
        // No inequality constrains the chart: bounded only if the reduced
        // objective vanishes.
        for (const Rational& v : obj_chart)
            if (v != 0) return {LpStatus::unbounded, Rational(0), {}};
        return {LpStatus::optimal, constant, chart.origin};
    }

    detail::Simplex solver(std::move(a), std::move(b));
    QVec z;
    Rational val;
    const LpStatus st = solver.maximize(c, z, val);
    if (st != LpStatus::optimal) return {st, Rational(0), {}};
    QVec t(k);
    for (int j = 0; j < k; ++j) t[j] = z[j] - z[k + j];
    return {LpStatus::optimal, val + constant, chart.from_chart(t)};
}

/// Exact maximum of objective.x over a finite point list (hence over its hull).
inline LpSolution lp_max(const QVec& objective, const VRep& v) {
    if (static_cast<int>(objective.size()) != v.dim)
        throw ScenarioMismatchError("objective dimension does not match V-representation");
    if (v.points.empty()) return {LpStatus::infeasible, Rational(0), {}};
    std::size_t best = 0;
    Rational best_val = dot(objective, v.points[0]);
    for (std::size_t i = 1; i < v.points.size(); ++i) {
        const Rational val = dot(objective, v.points[i]);
        if (val > best_val) {
            best_val = val;
            best = i;
        }
    }
    return {LpStatus::optimal, best_val, v.points[best]};
}

/// Exact membership of a point in the convex hull of a point list, decided by
/// a phase-1 feasibility program over the mixing weights.
inline bool member(const QVec& x, const VRep& v) {
    if (static_cast<int>(x.size()) != v.dim)
        throw ScenarioMismatchError("point dimension does not match V-representation");
    if (v.points.empty()) return false;
    const int n = static_cast<int>(v.points.size());
    const int d = v.dim;
    QMat a(d + 1, QVec(n));
    QVec b(d + 1);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < n; ++j) a[i][j] = v.points[j][i];
        b[i] = x[i];
    }
    for (int j = 0; j < n; ++j) a[d][j] = 1;
    b[d] = 1;
    detail::Simplex solver(std::move(a), std::move(b));
    QVec z;
    Rational val;
    return solver.maximize(QVec(n, Rational(0)), z, val) == LpStatus::optimal;
}

} // namespace bellkit
