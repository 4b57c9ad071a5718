#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>

#include "bellkit/collins_gisin.hpp"
#include "bellkit/relabeling.hpp"
#include "bellkit/simplex.hpp"

using namespace bellkit;

namespace {

CorrelationVector random_ns_mixture(const Scenario& s, std::mt19937& rng) {
    const auto det = deterministic_points(s);
    std::uniform_int_distribution<int> pick(0, 6);
    QVec acc(s.dim(), Rational(0));
    Rational total(0);
    for (const CorrelationVector& d : det) {
        const Rational w(pick(rng));
        total += w;
        for (int i = 0; i < s.dim(); ++i) acc[i] += w * d.values[i];
    }
    if (total == 0) return det[0];
    for (Rational& v : acc) v /= total;
    return CorrelationVector(s, std::move(acc));
}

QVec random_integer_coeff(const Scenario& s, std::mt19937& rng) {
    std::uniform_int_distribution<int> pick(-3, 3);
    QVec c(s.dim());
    for (Rational& v : c) v = Rational(pick(rng));
    return c;
}

const Relabeling& random_element(const RelabelingGroup& grp, std::mt19937& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, grp.size() - 1);
    return grp.elements[pick(rng)];
}

} // namespace

TEST_CASE("relabeling group sizes") {
    CHECK(relabeling_group(Scenario::parse("[2,2|2,2]")).size() == 128);
    CHECK(relabeling_group(Scenario::parse("[2,2|2,2]"), false).size() == 64);
    CHECK(relabeling_group(Scenario::parse("[3,3|3,3]")).size() == 10368);
    CHECK(relabeling_group(Scenario::parse("[3,3|3,3]"), false).size() == 5184);
    CHECK(relabeling_group(Scenario::parse("[2,2,2|2,2,2]")).size() == 4608);
    // No party swap is available on an asymmetric scenario even when asked for.
    const auto grp = relabeling_group(Scenario::parse("[2,3|2,2,2]"), true);
    CHECK_FALSE(grp.with_party_swap);
    CHECK(grp.size() == 576);
    // Mixed outcome counts: only setting permutations among equal-count settings.
    CHECK(relabeling_group(Scenario::parse("[2,3|2,3]"), false).size() == 144);
}

TEST_CASE("identity relabeling and validation") {
    const Scenario s = Scenario::parse("[2,3|2,2]");
    const Relabeling id = Relabeling::identity(s);
    const auto perm = index_permutation(s, id);
    for (int i = 0; i < s.dim(); ++i) CHECK(perm[i] == i);

    BellFunctional f(s, QVec(s.dim(), Rational(1, 3)), Rational(2), BoundKind::binary);
    const BellFunctional g = apply_relabeling(id, f);
    CHECK(g.coeff == f.coeff);
    CHECK(g.bound == f.bound);
    CHECK(g.kind == f.kind);

    Relabeling bad = id;
    bad.party_swap = true;
    CHECK_THROWS_AS(index_permutation(s, bad), ScenarioMismatchError);

    bad = id;
    std::swap(bad.alice_setting[0], bad.alice_setting[1]); // outcome counts 2 vs 3
    CHECK_THROWS_AS(index_permutation(s, bad), ScenarioMismatchError);

    bad = id;
    bad.bob_outcome[1] = {0, 0};
    CHECK_THROWS_AS(index_permutation(s, bad), ScenarioMismatchError);
}

TEST_CASE("relabeling action preserves evaluation and nonsignaling") {
    std::mt19937 rng(17);
    for (const char* name : {"[2,2|2,2]", "[2,3|2,2]"}) {
        const Scenario s = Scenario::parse(name);
        const auto grp = relabeling_group(s);
        for (int trial = 0; trial < 20; ++trial) {
            const Relabeling& g = random_element(grp, rng);
            const CorrelationVector p = random_ns_mixture(s, rng);
            const BellFunctional f(s, random_integer_coeff(s, rng), Rational(0),
                                   BoundKind::nonsignaling);
            const CorrelationVector gp = apply_relabeling(g, p);
            CHECK(is_nonsignaling(gp));
            CHECK(evaluate(apply_relabeling(g, f), gp) == evaluate(f, p));
        }
        // Deterministic points map onto deterministic points.
        const auto det = deterministic_points(s);
        std::set<QVec> det_set;
        for (const CorrelationVector& d : det) det_set.insert(d.values);
        for (int trial = 0; trial < 10; ++trial) {
            const Relabeling& g = random_element(grp, rng);
            const CorrelationVector img = apply_relabeling(g, det[trial % det.size()]);
            CHECK(det_set.count(img.values) == 1);
        }
    }
}

TEST_CASE("party swap moves entries across the bar") {
    const Scenario s = Scenario::parse("[2,3|2,3]");
    Relabeling g = Relabeling::identity(s);
    g.party_swap = true;
    QVec c(s.dim(), Rational(0));
    c[s.index(0, 1, 0, 2)] = 1;
    const BellFunctional f(s, std::move(c), Rational(1), BoundKind::nonsignaling);
    const BellFunctional swapped = apply_relabeling(g, f);
    for (int i = 0; i < s.dim(); ++i)
        CHECK(swapped.coeff[i] == (i == s.index(1, 0, 2, 0) ? Rational(1) : Rational(0)));
}

TEST_CASE("composition law and inverses") {
    std::mt19937 rng(23);
    const Scenario s = Scenario::parse("[2,2|2,2]");
    const auto grp = relabeling_group(s);
    for (int trial = 0; trial < 40; ++trial) {
        const Relabeling& g = random_element(grp, rng);
        const Relabeling& h = random_element(grp, rng);
        const auto pg = index_permutation(s, g);
        const auto ph = index_permutation(s, h);
        const auto pgh = index_permutation(s, compose(g, h));
        for (int i = 0; i < s.dim(); ++i) CHECK(pgh[i] == pg[ph[i]]);

        const BellFunctional f(s, random_integer_coeff(s, rng), Rational(1), BoundKind::binary);
        CHECK(apply_relabeling(compose(g, h), f).coeff ==
              apply_relabeling(g, apply_relabeling(h, f)).coeff);
        CHECK(apply_relabeling(inverse(g), apply_relabeling(g, f)).coeff == f.coeff);

        const auto pid = index_permutation(s, compose(g, inverse(g)));
        for (int i = 0; i < s.dim(); ++i) CHECK(pid[i] == i);
    }
}

TEST_CASE("group is closed under composition and inverse") {
    const Scenario s = Scenario::parse("[2,2|2,2]");
    const auto grp = relabeling_group(s);
    std::set<std::vector<int>> perms(grp.perms.begin(), grp.perms.end());
    CHECK(perms.size() == grp.size()); // elements act by distinct permutations
    std::mt19937 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const Relabeling& g = random_element(grp, rng);
        const Relabeling& h = random_element(grp, rng);
        CHECK(perms.count(index_permutation(s, compose(g, h))) == 1);
        CHECK(perms.count(index_permutation(s, inverse(g))) == 1);
    }
}

TEST_CASE("canonical form is idempotent and orbit invariant") {
    std::mt19937 rng(31);
    for (const char* name : {"[2,2|2,2]", "[2,3|2,2]"}) {
        const Scenario s = Scenario::parse(name);
        const auto grp = relabeling_group(s);
        for (int trial = 0; trial < 8; ++trial) {
            const BellFunctional f(s, random_integer_coeff(s, rng), Rational(2),
                                   BoundKind::nonsignaling);
            const BellFunctional canon = canonical_form(f, grp);
            CHECK(canonical_form(canon, grp).coeff == canon.coeff);
            CHECK(canonical_form(canon, grp).bound == canon.bound);
            for (int k = 0; k < 5; ++k) {
                const BellFunctional moved = apply_relabeling(random_element(grp, rng), f);
                const BellFunctional canon2 = canonical_form(moved, grp);
                CHECK(canon2.coeff == canon.coeff);
                CHECK(canon2.bound == canon.bound);
            }
            // Positive rescaling lands on the same gcd-normalized representative.
            QVec doubled = f.coeff;
            for (Rational& v : doubled) v *= 6;
            const BellFunctional scaled(s, std::move(doubled), f.bound * 6, f.kind);
            CHECK(canonical_form(scaled, grp).coeff == canon.coeff);
        }
    }
}

TEST_CASE("orbit classification") {
    std::mt19937 rng(41);
    const Scenario s = Scenario::parse("[2,2|2,2]");
    const auto grp = relabeling_group(s);
    const BellFunctional f(s, random_integer_coeff(s, rng), Rational(1), BoundKind::nonsignaling);

    const auto single = orbit_classify({f}, grp);
    REQUIRE(single.size() == 1);
    CHECK(single[0].multiplicity == 1);

    const Relabeling& g = random_element(grp, rng);
    const auto pair = orbit_classify({f, apply_relabeling(g, f)}, grp);
    REQUIRE(pair.size() == 1);
    CHECK(pair[0].multiplicity == 2);
    CHECK(pair[0].canonical.coeff == single[0].canonical.coeff);

    const auto dup = orbit_classify({f, f, f}, grp);
    REQUIRE(dup.size() == 1);
    CHECK(dup[0].multiplicity == 3);

    // A functional from a different orbit stays separate; orbit order is
    // stable under shuffling the input.
    QVec other(s.dim(), Rational(0));
    other[s.index(0, 0, 0, 0)] = 5;
    const BellFunctional h(s, std::move(other), Rational(3), BoundKind::nonsignaling);
    std::vector<BellFunctional> batch{f, h, apply_relabeling(g, f), apply_relabeling(g, h)};
    const auto orbits = orbit_classify(batch, grp);
    REQUIRE(orbits.size() == 2);
    CHECK(orbits[0].multiplicity + orbits[1].multiplicity == 4);
    std::shuffle(batch.begin(), batch.end(), rng);
    const auto orbits2 = orbit_classify(batch, grp);
    REQUIRE(orbits2.size() == 2);
    for (int i = 0; i < 2; ++i) {
        CHECK(orbits2[i].canonical.coeff == orbits[i].canonical.coeff);
        CHECK(orbits2[i].multiplicity == orbits[i].multiplicity);
    }
}

TEST_CASE("lp_max over the nonsignaling polytope is relabeling invariant") {
    std::mt19937 rng(47);
    const Scenario s = Scenario::parse("[2,2|2,2]");
    const auto grp = relabeling_group(s);
    const HRep ns = ns_hrep(s);
    for (int trial = 0; trial < 6; ++trial) {
        const BellFunctional f(s, random_integer_coeff(s, rng), Rational(0),
                               BoundKind::nonsignaling);
        const LpSolution base = lp_max(f.coeff, ns);
        REQUIRE(base.status == LpStatus::optimal);
        for (int k = 0; k < 4; ++k) {
            const BellFunctional moved = apply_relabeling(random_element(grp, rng), f);
            const LpSolution got = lp_max(moved.coeff, ns);
            REQUIRE(got.status == LpStatus::optimal);
            CHECK(got.value == base.value);
        }
    }
}
