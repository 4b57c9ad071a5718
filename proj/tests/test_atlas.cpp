#include <catch2/catch_amalgamated.hpp>

#include "bellkit/atlas.hpp"
#include "bellkit/collins_gisin.hpp"
#include "bellkit/relabeling.hpp"

using namespace bellkit;

TEST_CASE("diagonal functional coefficients") {
    const BellFunctional f = build_Ia();
    const Scenario& s = f.scenario;
    CHECK(s.str() == "[3,3|3,3]");
    CHECK(f.bound == 1);
    CHECK(f.kind == BoundKind::binary);
    CHECK(f.coeff[s.index(0, 0, 0, 0)] == 1);
    CHECK(f.coeff[s.index(0, 0, 1, 1)] == -1);
    CHECK(f.coeff[s.index(1, 0, 1, 1)] == 1);
    int nonzero = 0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    const Rational& c = f.coeff[s.index(x, y, a, b)];
                    if (a == 2 || b == 2 || a != b) CHECK(c == 0);
                    if (c != 0) ++nonzero;
                }
    CHECK(nonzero == 8);
}

TEST_CASE("chained functional construction and tightness") {
    CHECK_THROWS_AS(build_Ibn(2), InvalidScenarioError);
    for (int n = 3; n <= 6; ++n) {
        const BellFunctional f = build_Ibn(n);
        const Scenario& s = f.scenario;
        CHECK(s.alice_outcomes(0) == 2);
        CHECK(s.alice_outcomes(1) == n);
        CHECK(s.bob_settings() == n);
        CHECK(f.bound == n - 2);
        CHECK(f.kind == BoundKind::nary);
        CHECK(f.arity == n - 1);

        // The all-zeros deterministic point reaches the bound and has
        // single-outcome support, so the bound is tight for every arity.
        CorrelationVector det(s);
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < n; ++y) det.p(x, y, 0, 0) = 1;
        CHECK(evaluate(f, det) == f.bound);
    }

    // Marginal expansion against Bob's setting 0, spot checked for n=3.
    const BellFunctional f = build_Ibn(3);
    const Scenario& s = f.scenario;
    CHECK(f.coeff[s.index(0, 0, 0, 0)] == 0);  // -P(0,0|0,0) + P(0,0|0,0)
    CHECK(f.coeff[s.index(0, 0, 0, 1)] == -1); // marginal expansion remainder
    CHECK(f.coeff[s.index(0, 1, 0, 0)] == 1);
    CHECK(f.coeff[s.index(0, 2, 0, 0)] == 1);
    CHECK(f.coeff[s.index(1, 0, 0, 0)] == -1);
    CHECK(f.coeff[s.index(1, 1, 1, 0)] == -1);
    CHECK(f.coeff[s.index(1, 2, 2, 0)] == -1);
}

TEST_CASE("three-setting functional values") {
    const BellFunctional f = build_Ic();
    const Scenario& s = f.scenario;
    CHECK(s.str() == "[2,2,2|2,2,2]");
    CHECK(f.bound == 0);

    CorrelationVector uniform = uniform_point(s);
    CHECK(evaluate(f, uniform) == Rational(-3, 2));

    CorrelationVector det(s);
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) det.p(x, y, 0, 0) = 1;
    CHECK(evaluate(f, det) == -2);

    int nonzero = 0;
    for (const Rational& c : f.coeff)
        if (c != 0) ++nonzero;
    CHECK(nonzero == 8);
    CHECK(f.coeff[s.index(2, 2, 0, 0)] == 1);
    CHECK(f.coeff[s.index(0, 0, 1, 0)] == -1);
}

TEST_CASE("nonsignaling maxima of the named functionals") {
    const BellFunctional ia = build_Ia();
    const LpSolution va = lp_max(ia.coeff, ns_hrep(ia.scenario));
    REQUIRE(va.status == LpStatus::optimal);
    CHECK(va.value == Rational(4, 3)); // strictly above the binary bound 1

    const BellFunctional ib = build_Ibn(3);
    const LpSolution vb = lp_max(ib.coeff, ns_hrep(ib.scenario));
    REQUIRE(vb.status == LpStatus::optimal);
    CHECK(vb.value == Rational(4, 3));

    const BellFunctional ic = build_Ic();
    const LpSolution vc = lp_max(ic.coeff, ns_hrep(ic.scenario));
    REQUIRE(vc.status == LpStatus::optimal);
    CHECK(vc.value == Rational(1, 2));
}

TEST_CASE("restricted vertices respect the claimed bounds") {
    const BellFunctional ia = build_Ia();
    const VRep ra = restricted_vertices(Scenario::parse("[2,2|2,2]"), ia.scenario);
    CHECK(ra.points.size() == 3807);
    for (const QVec& p : ra.points) CHECK(dot(ia.coeff, p) <= ia.bound);

    const BellFunctional ib = build_Ibn(3);
    const VRep rb = restricted_vertices(Scenario::parse("[2,2|2,2,2]"), ib.scenario);
    CHECK(rb.points.size() == 1386);
    for (const QVec& p : rb.points) CHECK(dot(ib.coeff, p) <= ib.bound);
}

TEST_CASE("certificate workspace guards its basis") {
    CertificateWorkspace ws(3, 0);
    CHECK_THROWS_AS(ws.add(2, 0, 0, 0, Int(1)), CertificateError); // x=0 has two outcomes
    CHECK_THROWS_AS(ws.add(0, 2, 1, 0, Int(1)), CertificateError);
    CHECK_THROWS_AS(ws.add(0, 0, 1, 3, Int(1)), CertificateError);
    CHECK_THROWS_AS(CertificateWorkspace(3, 3), CertificateError);
    CHECK_THROWS_AS(CertificateWorkspace(2, 0), InvalidScenarioError);
}

TEST_CASE("dual certificate yields n-2 for every dropped outcome") {
    for (int n : {3, 4, 5, 8, 50}) CHECK(verify_nary_certificate(n) == n - 2);

    // Frozen coefficient table entries for n=3, dropped outcome 0, computed
    // by direct hand expansion of the dual combination.
    const NaryCertificate cert = nary_certificate(3);
    REQUIRE(cert.zeta.size() == 3);
    const Scenario s = ibn_scenario(3);
    const ZVec& z = cert.zeta[0];
    CHECK(z[s.index(0, 0, 0, 1)] == -5);
    CHECK(z[s.index(1, 0, 0, 0)] == -5);
    CHECK(z[s.index(1, 1, 0, 1)] == -11);
    CHECK(z[s.index(1, 1, 1, 1)] == 1);
    CHECK(cert.max_zeta == 1);
    int at_max = 0;
    for (const Int& v : z)
        if (v == cert.max_zeta) ++at_max;
    CHECK(at_max == 20);
    // Every dropped outcome reaches the same maximum (construction checks
    // this internally; assert it on the emitted tables as well).
    for (const ZVec& tab : cert.zeta) {
        Int best = tab[0];
        for (const Int& v : tab)
            if (v > best) best = v;
        CHECK(best == 1);
    }
}

TEST_CASE("primal maximum agrees with the certificate") {
    CHECK(nary_bound_by_lp(3) == 1);
    CHECK(verify_nary_certificate(3) == 1);
    CHECK(nary_bound_by_lp(4) == 2);
    CHECK(verify_nary_certificate(4) == 2);
}

namespace {

std::vector<BellFunctional> facet_functionals(const HRep& h, const Scenario& s) {
    std::vector<BellFunctional> fs;
    fs.reserve(h.ineqs.size());
    for (const QVec& row : h.ineqs) {
        QVec coeff(row.begin(), row.end() - 1);
        fs.emplace_back(s, std::move(coeff), row.back(), BoundKind::nary, 0);
    }
    return fs;
}

} // namespace

TEST_CASE("binary-restricted polytope facets single out the diagonal functional") {
    const BellFunctional ia = build_Ia();
    const VRep v = restricted_vertices(Scenario::parse("[2,2|2,2]"), ia.scenario);
    const HRep h = facets_from_vrep(v);
    CHECK(h.ineqs.size() == 468);

    const RelabelingGroup grp = relabeling_group(ia.scenario);
    const auto orbits = orbit_classify(facet_functionals(h, ia.scenario), grp);
    const HRep ns = ns_hrep(ia.scenario);
    std::vector<const Orbit*> non_face;
    for (const Orbit& o : orbits)
        if (!is_face_of(o.canonical, ns)) non_face.push_back(&o);
    REQUIRE(non_face.size() == 1);

    const BellFunctional want = canonical_form(ia, grp);
    CHECK(non_face[0]->canonical.coeff == want.coeff);
    CHECK(non_face[0]->canonical.bound == want.bound);
    CHECK(ia.bound == 1);

    int total = 0;
    for (const Orbit& o : orbits) total += o.multiplicity;
    CHECK(total == 468);
}

TEST_CASE("binary-restricted polytope facets single out the chained functional") {
    const BellFunctional ib = build_Ibn(3);
    const VRep v = restricted_vertices(Scenario::parse("[2,2|2,2,2]"), ib.scenario);
    const HRep h = facets_from_vrep(v);
    CHECK(h.ineqs.size() == 126);

    const RelabelingGroup grp = relabeling_group(ib.scenario);
    const auto orbits = orbit_classify(facet_functionals(h, ib.scenario), grp);
    const HRep ns = ns_hrep(ib.scenario);
    std::vector<const Orbit*> non_face;
    for (const Orbit& o : orbits)
        if (!is_face_of(o.canonical, ns)) non_face.push_back(&o);
    REQUIRE(non_face.size() == 1);

    const BellFunctional want = canonical_form(ib, grp);
    CHECK(non_face[0]->canonical.coeff == want.coeff);
    CHECK(non_face[0]->canonical.bound == want.bound);
}

TEST_CASE("named functionals have stable canonical forms") {
    // A relabeled copy of each functional lands on the same canonical form,
    // covering the outcome-swap example: flipping outcomes 0 and 1 in every
    // setting negates the diagonal terms yet stays in the orbit.
    const BellFunctional ia = build_Ia();
    Relabeling g = Relabeling::identity(ia.scenario);
    for (int x = 0; x < 2; ++x) {
        std::swap(g.alice_outcome[x][0], g.alice_outcome[x][1]);
        std::swap(g.bob_outcome[x][0], g.bob_outcome[x][1]);
    }
    const BellFunctional swapped = apply_relabeling(g, ia);
    const Scenario& s = ia.scenario;
    for (int k = 0; k < 2; ++k)
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                CHECK(swapped.coeff[s.index(x, y, 1 - k, 1 - k)] ==
                      ia.coeff[s.index(x, y, k, k)]);
    const RelabelingGroup grp = relabeling_group(ia.scenario);
    const BellFunctional ca = canonical_form(ia, grp);
    const BellFunctional cs = canonical_form(swapped, grp);
    CHECK(ca.coeff == cs.coeff);
    CHECK(ca.bound == cs.bound);
}
