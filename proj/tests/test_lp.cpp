#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "bellkit/linalg.hpp"
#include "bellkit/polytope.hpp"
#include "bellkit/simplex.hpp"

using namespace bellkit;

namespace {

HRep box(int d) {
    HRep h;
    h.dim = d;
    for (int i = 0; i < d; ++i) {
        QVec lo(d + 1, Rational(0)), hi(d + 1, Rational(0));
        lo[i] = -1;
        hi[i] = 1;
        hi[d] = 1;
        h.ineqs.push_back(lo);
        h.ineqs.push_back(hi);
    }
    return h;
}

} // namespace

TEST_CASE("rref, rank, nullspace, inverse") {
    QMat m = {{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
    CHECK(rank(m) == 2);

    QMat ns = nullspace(m, 3);
    REQUIRE(ns.size() == 1);
    for (const QVec& row : m) CHECK(dot(row, ns[0]) == 0);

    QMat a = {{2, 1}, {1, 1}}, inv;
    REQUIRE(invert(a, inv));
    CHECK(inv == QMat{{1, -1}, {-1, 2}});
    QMat sing = {{1, 2}, {2, 4}};
    CHECK_FALSE(invert(sing, inv));
}

TEST_CASE("chart from equalities") {
    // x + y + z = 1, x - y = 0  ->  one-dimensional solution set.
    QMat eqs = {{1, 1, 1, 1}, {1, -1, 0, 0}};
    auto chart = chart_from_equalities(eqs, 3);
    REQUIRE(chart.has_value());
    CHECK(chart->dim() == 1);
    const QVec p = chart->from_chart({Rational(5)});
    CHECK(p[0] + p[1] + p[2] == 1);
    CHECK(p[0] == p[1]);
    CHECK(chart->to_chart(p) == QVec{Rational(5)});

    // Inconsistent system: x + y = 0 and x + y = 1.
    QMat bad = {{1, 1, 0}, {1, 1, 1}};
    CHECK_FALSE(chart_from_equalities(bad, 2).has_value());
}

TEST_CASE("lp_max on a box") {
    const HRep h = box(3);
    QVec obj = {1, 2, -1};
    const LpSolution sol = lp_max(obj, h);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.value == 3);
    CHECK(sol.x == QVec{1, 1, 0});
}

TEST_CASE("lp_max with equalities") {
    // Probability simplex in 4 variables, maximize x0 + 2 x1 + 3 x2 - x3.
    HRep h;
    h.dim = 4;
    for (int i = 0; i < 4; ++i) {
        QVec row(5, Rational(0));
        row[i] = -1;
        h.ineqs.push_back(row);
    }
    h.eqs.push_back(QVec{1, 1, 1, 1, 1});
    const LpSolution sol = lp_max(QVec{1, 2, 3, -1}, h);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.value == 3);
    CHECK(sol.x == QVec{0, 0, 1, 0});
}

TEST_CASE("lp_max detects infeasibility and unboundedness") {
    HRep infeas;
    infeas.dim = 1;
    infeas.ineqs.push_back(QVec{1, 0});   //  x <= 0
    infeas.ineqs.push_back(QVec{-1, -1}); // -x <= -1, i.e. x >= 1
    CHECK(lp_max(QVec{1}, infeas).status == LpStatus::infeasible);

    HRep infeas_eq;
    infeas_eq.dim = 2;
    infeas_eq.eqs.push_back(QVec{1, 1, 0});
    infeas_eq.eqs.push_back(QVec{1, 1, 1});
    CHECK(lp_max(QVec{1, 0}, infeas_eq).status == LpStatus::infeasible);

    HRep unb;
    unb.dim = 2;
    unb.ineqs.push_back(QVec{-1, 0, 0}); // x >= 0
    unb.ineqs.push_back(QVec{0, -1, 0}); // y >= 0
    CHECK(lp_max(QVec{1, 1}, unb).status == LpStatus::unbounded);

    // Unconstrained chart direction with a nonzero objective component.
    HRep free_dir;
    free_dir.dim = 2;
    free_dir.eqs.push_back(QVec{1, 0, 0}); // x = 0, y free
    CHECK(lp_max(QVec{0, 1}, free_dir).status == LpStatus::unbounded);
    const LpSolution ok = lp_max(QVec{1, 0}, free_dir);
    REQUIRE(ok.status == LpStatus::optimal);
    CHECK(ok.value == 0);
}

TEST_CASE("lp_max value sits on a returned feasible point") {
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> coeff(-4, 4);
    const HRep h = box(4);
    for (int rep = 0; rep < 20; ++rep) {
        QVec obj(4);
        for (auto& v : obj) v = coeff(rng);
        const LpSolution sol = lp_max(obj, h);
        REQUIRE(sol.status == LpStatus::optimal);
        CHECK(dot(obj, sol.x) == sol.value);
        for (const QVec& row : h.ineqs) CHECK(row_slack(row, sol.x) >= 0);
        // Unit box optimum picks up exactly the positive coefficients.
        Rational expect(0);
        for (const Rational& v : obj)
            if (v > 0) expect += v;
        CHECK(sol.value == expect);
    }
}

TEST_CASE("membership in a convex hull") {
    VRep square;
    square.dim = 2;
    square.points = {QVec{0, 0}, QVec{1, 0}, QVec{0, 1}, QVec{1, 1}};
    CHECK(member(QVec{Rational(1, 2), Rational(1, 2)}, square));
    CHECK(member(QVec{1, 1}, square));
    CHECK(member(QVec{Rational(1, 3), 0}, square));
    CHECK_FALSE(member(QVec{Rational(3, 2), Rational(1, 2)}, square));
    CHECK_FALSE(member(QVec{Rational(-1, 100), 0}, square));
    CHECK_THROWS_AS(member(QVec{0, 0, 0}, square), ScenarioMismatchError);
}

TEST_CASE("degenerate LP does not cycle") {
    // Klee-Minty-style skewed cube plus redundant rows; exercises ties.
    HRep h;
    h.dim = 3;
    h.ineqs.push_back(QVec{1, 0, 0, 1});
    h.ineqs.push_back(QVec{4, 1, 0, 8});
    h.ineqs.push_back(QVec{8, 4, 1, 64});
    for (int i = 0; i < 3; ++i) {
        QVec row(4, Rational(0));
        row[i] = -1;
        h.ineqs.push_back(row);
    }
    h.ineqs.push_back(QVec{1, 1, 1, 100}); // redundant
    const LpSolution sol = lp_max(QVec{4, 2, 1}, h);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.value == 64);
}
