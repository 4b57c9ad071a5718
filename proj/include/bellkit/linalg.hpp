#pragma once

#include <cstddef>
#include <vector>

#include "bellkit/rational.hpp"

namespace bellkit {

/// Gauss-Jordan elimination to reduced row echelon form, exact over the
/// rationals. Returns the rank; pivot_cols receives one column per pivot row.
/// Rows may be wider than the eliminated range if `cols` is given (useful for
/// augmented systems: eliminate on the coefficient block only).
inline int rref_in_place(QMat& m, std::vector<int>& pivot_cols, int cols = -1) {
    pivot_cols.clear();
    if (m.empty()) return 0;
    const int width = cols < 0 ? static_cast<int>(m[0].size()) : cols;
    int row = 0;
    for (int col = 0; col < width && row < static_cast<int>(m.size()); ++col) {
        int piv = -1;
        for (int r = row; r < static_cast<int>(m.size()); ++r) {
            if (m[r][col] != 0) {
                piv = r;
                break;
            }
        }
        if (piv < 0) continue;
        std::swap(m[row], m[piv]);
        const Rational inv = Rational(1) / m[row][col];
        for (Rational& v : m[row]) v *= inv;
        for (int r = 0; r < static_cast<int>(m.size()); ++r) {
            if (r == row || m[r][col] == 0) continue;
            const Rational f = m[r][col];
            for (std::size_t c = col; c < m[r].size(); ++c) m[r][c] -= f * m[row][c];
        }
        pivot_cols.push_back(col);
        ++row;
    }
    return row;
}

inline int rank(QMat m) {
    std::vector<int> pc;
    return rref_in_place(m, pc);
}

/// Basis of { x : m x = 0 } for an n_cols-wide matrix. Each basis vector has a
/// 1 at "its" free column and 0 at the other free columns, so reading those
/// coordinates back off a vector in the span recovers its coefficients.
inline QMat nullspace(QMat m, int n_cols) {
    std::vector<int> pivot_cols;
    const int r = rref_in_place(m, pivot_cols, n_cols);
    std::vector<bool> is_pivot(n_cols, false);
    for (int c : pivot_cols) is_pivot[c] = true;
    QMat basis;
    for (int free = 0; free < n_cols; ++free) {
        if (is_pivot[free]) continue;
        QVec v(n_cols, Rational(0));
        v[free] = 1;
        for (int i = 0; i < r; ++i) v[pivot_cols[i]] = -m[i][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Inverse of a square matrix; returns false if singular.
inline bool invert(const QMat& a, QMat& out) {
    const int n = static_cast<int>(a.size());
    QMat aug(n, QVec(2 * n, Rational(0)));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug[i][j] = a[i][j];
        aug[i][n + i] = 1;
    }
    std::vector<int> pc;
    if (rref_in_place(aug, pc, n) != n) return false;
    out.assign(n, QVec(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[i][j] = aug[i][n + j];
    return true;
}

inline QVec mat_vec(const QMat& m, const QVec& x) {
    QVec out;
    out.reserve(m.size());
    for (const QVec& row : m) out.push_back(dot(row, x));
    return out;
}

/// Affine coordinate chart: x = origin + sum_j t_j basis[j], with covectors
/// readback[j] satisfying readback[j] . basis[i] = delta_ij and
/// readback[j] . origin-independent read-off t = readback (x - origin).
///
/// Charts let the polytope code strip affine degeneracy once and then work in
/// a full-dimensional space with exact round trips both ways.
struct AffineChart {
    QVec origin;
    QMat basis;    // chart_dim vectors of length full_dim
    QMat readback; // chart_dim covectors of length full_dim

    int full_dim() const { return static_cast<int>(origin.size()); }
    int dim() const { return static_cast<int>(basis.size()); }

    QVec to_chart(const QVec& x) const {
        QVec d(x);
        for (std::size_t i = 0; i < d.size(); ++i) d[i] -= origin[i];
        return mat_vec(readback, d);
    }

    QVec from_chart(const QVec& t) const {
        QVec x(origin);
        for (int j = 0; j < dim(); ++j) {
            if (t[j] == 0) continue;
            for (std::size_t i = 0; i < x.size(); ++i) x[i] += t[j] * basis[j][i];
        }
        return x;
    }

    /// Restricts the half-space g.x <= h to the chart: g'.t <= h'.
    std::pair<QVec, Rational> pull_inequality(const QVec& g, const Rational& h) const {
        QVec gp(dim());
        for (int j = 0; j < dim(); ++j) gp[j] = dot(g, basis[j]);
        return {std::move(gp), h - dot(g, origin)};
    }

    /// Extends a chart half-space a.t <= h to full space (valid on the chart's
    /// affine hull, where t can be read back linearly).
    std::pair<QVec, Rational> push_inequality(const QVec& a, const Rational& h) const {
        QVec n(full_dim(), Rational(0));
        for (int j = 0; j < dim(); ++j) {
            if (a[j] == 0) continue;
            for (int i = 0; i < full_dim(); ++i) n[i] += a[j] * readback[j][i];
        }
        return {std::move(n), h + dot(n, origin)};
    }

    static AffineChart identity(int d) {
        AffineChart c;
        c.origin.assign(d, Rational(0));
        c.basis.assign(d, QVec(d, Rational(0)));
        c.readback.assign(d, QVec(d, Rational(0)));
        for (int i = 0; i < d; ++i) {
            c.basis[i][i] = 1;
            c.readback[i][i] = 1;
        }
        return c;
    }
};

/// Affine hull of a point set, as a chart anchored at points[0]. The basis is
/// the reduced row echelon form of the point differences, so readback rows are
/// unit covectors at the pivot columns.
inline AffineChart affine_hull(const QMat& points) {
    if (points.empty()) throw Error("affine hull of an empty point set");
    const int d = static_cast<int>(points[0].size());
    QMat diffs;
    for (std::size_t i = 1; i < points.size(); ++i) {
        QVec v(points[i]);
        for (int j = 0; j < d; ++j) v[j] -= points[0][j];
        diffs.push_back(std::move(v));
    }
    AffineChart chart;
    chart.origin = points[0];
    if (diffs.empty()) return chart;
    std::vector<int> pivot_cols;
    const int r = rref_in_place(diffs, pivot_cols);
    for (int i = 0; i < r; ++i) {
        chart.basis.push_back(diffs[i]);
        QVec rb(d, Rational(0));
        rb[pivot_cols[i]] = 1;
        chart.readback.push_back(std::move(rb));
    }
    return chart;
}

/// Equality constraints cutting out the chart's affine hull: rows (n, c) with
/// n.x = c exactly on the hull. Normals are primitive integers with canonical
/// sign, sorted, so two charts of the same hull produce identical rows.
inline QMat hull_equalities(const AffineChart& chart) {
    QMat m(chart.basis);
    QMat normals = m.empty() ? QMat() : nullspace(std::move(m), chart.full_dim());
    if (chart.basis.empty()) {
        // Zero-dimensional hull: the point itself pins every coordinate.
        normals.clear();
        for (int i = 0; i < chart.full_dim(); ++i) {
            QVec e(chart.full_dim(), Rational(0));
            e[i] = 1;
            normals.push_back(std::move(e));
        }
    }
    // nullspace() works on row vectors x with m x = 0; we need covectors n with
    // n . basis_j = 0 for every j, which is the same system since dot is
    // symmetric. Append the offset and normalize.
    QMat rows;
    for (const QVec& n : normals) {
        ZVec zn = to_primitive_integer(n);
        canonical_sign(zn);
        QVec row = to_rational(zn);
        row.push_back(dot(row, chart.origin));
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(), [](const QVec& a, const QVec& b) {
        return lex_compare(a, b) < 0;
    });
    return rows;
}

} // namespace bellkit
