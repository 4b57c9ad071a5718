#include <catch2/catch_amalgamated.hpp>

#include <unordered_set>

#include "bellkit/wiring.hpp"

using namespace bellkit;

namespace {

/// Reference implementation: image set via the full wiring-pair product.
QMat brute_force_images(const Scenario& base, const Scenario& target) {
    const VRep v = ns_vertices(base);
    const auto wa = enumerate_wirings(base, target, Party::alice);
    const auto wb = enumerate_wirings(base, target, Party::bob);
    std::unordered_set<std::string> seen;
    QMat out;
    for (const QVec& pv : v.points) {
        const CorrelationVector p(base, pv);
        for (const auto& a : wa)
            for (const auto& b : wb) {
                CorrelationVector img = apply_wiring(p, a, b);
                if (seen.insert(qvec_key(img.values)).second) out.push_back(img.values);
            }
    }
    sort_rows(out);
    return out;
}

} // namespace

TEST_CASE("wiring counts") {
    const Scenario s22 = Scenario::parse("[2,2|2,2]");
    const Scenario s33 = Scenario::parse("[3,3|3,3]");
    CHECK(count_wirings(s22, s33, Party::alice) == 324);
    CHECK(count_wirings(s22, s33, Party::bob) == 324);

    const Scenario s24 = Scenario::parse("[2,4|2,4]");
    const Scenario s222 = Scenario::parse("[2,2,2|2,2,2]");
    CHECK(count_wirings(s24, s222, Party::alice) == 8000);

    CHECK(static_cast<long long>(enumerate_wirings(s22, s33, Party::alice).size()) == 324);
    CHECK(static_cast<long long>(enumerate_wirings(s22, s22, Party::bob).size()) == 64);
}

TEST_CASE("identity wiring reproduces the table") {
    const Scenario s = Scenario::parse("[2,2|2,2]");
    const auto wirings = enumerate_wirings(s, s, Party::alice);
    const DeterministicWiring* identity = nullptr;
    for (const auto& w : wirings) {
        bool ok = true;
        for (int xp = 0; xp < 2; ++xp)
            if (w.per_target[xp].source != xp || w.per_target[xp].map != std::vector<int>{0, 1})
                ok = false;
        if (ok) identity = &w;
    }
    REQUIRE(identity != nullptr);
    DeterministicWiring idb = *identity;
    idb.party = Party::bob;
    for (const QVec& pv : ns_vertices(s).points) {
        const CorrelationVector p(s, pv);
        CHECK(apply_wiring(p, *identity, idb).values == p.values);
    }
}

TEST_CASE("constant outcome maps give deterministic tables") {
    const Scenario s = Scenario::parse("[2,2|2,2]");
    const Scenario t = Scenario::parse("[2,3|2,2]");
    DeterministicWiring wa{Party::alice, s, t, {OutcomeMap{0, {1, 1}}, OutcomeMap{1, {2, 2}}}};
    DeterministicWiring wb{Party::bob, s, t, {OutcomeMap{0, {0, 0}}, OutcomeMap{1, {1, 1}}}};
    const CorrelationVector img = apply_wiring(uniform_point(s), wa, wb);
    CHECK(img.values == deterministic_point(t, {1, 2}, {0, 1}).values);
}

TEST_CASE("injective embedding leaves the extra outcome unused") {
    const Scenario s = Scenario::parse("[2,2|2,2]");
    const Scenario t = Scenario::parse("[3,3|3,3]");
    // Pick a nonlocal vertex (one with 1/2 entries).
    const VRep v = ns_vertices(s);
    const QVec* pr = nullptr;
    for (const QVec& p : v.points)
        for (const Rational& q : p)
            if (q == Rational(1, 2)) {
                pr = &p;
                break;
            }
    REQUIRE(pr != nullptr);
    DeterministicWiring wa{Party::alice, s, t, {OutcomeMap{0, {0, 1}}, OutcomeMap{1, {0, 1}}}};
    DeterministicWiring wb{Party::bob, s, t, {OutcomeMap{0, {0, 1}}, OutcomeMap{1, {0, 1}}}};
    const CorrelationVector img = apply_wiring(CorrelationVector(s, *pr), wa, wb);
    CHECK(is_nonsignaling(img));
    for (int x = 0; x < 3 - 1; ++x)
        for (int y = 0; y < 2; ++y) CHECK(img.alice_marginal(2, x, y) == 0);
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 2; ++x) CHECK(img.bob_marginal(2, y, x) == 0);
}

TEST_CASE("wiring images stay no-signaling") {
    const Scenario s = Scenario::parse("[2,2|2,2]");
    const Scenario t = Scenario::parse("[2,3|2,2]");
    const auto wa = enumerate_wirings(s, t, Party::alice);
    const auto wb = enumerate_wirings(s, t, Party::bob);
    const VRep v = ns_vertices(s);
    // Sample a few of each; the full product is covered by the fast-path test.
    for (std::size_t i = 0; i < v.points.size(); i += 7) {
        const CorrelationVector p(s, v.points[i]);
        for (std::size_t j = 0; j < wa.size(); j += 13)
            for (std::size_t k = 0; k < wb.size(); k += 11)
                CHECK(is_nonsignaling(apply_wiring(p, wa[j], wb[k])));
    }
}

TEST_CASE("factored image enumeration matches the brute-force product") {
    for (auto [bs, ts] : {std::pair{"[2,2|2,2]", "[2,2|2,2]"},
                          std::pair{"[2,2|2,2]", "[2,3|2,2]"},
                          std::pair{"[2,2|2,2]", "[3,2|2,3]"}}) {
        const Scenario base = Scenario::parse(bs);
        const Scenario target = Scenario::parse(ts);
        const VRep fast = restricted_vertices(base, target);
        const QMat brute = brute_force_images(base, target);
        CHECK(fast.points == brute);
    }
}

TEST_CASE("restriction to the same binary scenario changes nothing") {
    const Scenario s = Scenario::parse("[2,2|2,2]");
    const VRep restricted = restricted_vertices(s, s);
    const VRep ns = ns_vertices(s);
    CHECK(polytope_equal(restricted, ns));
    // Every true vertex shows up among the images.
    std::unordered_set<std::string> keys;
    for (const QVec& p : restricted.points) keys.insert(qvec_key(p));
    for (const QVec& p : ns.points) CHECK(keys.count(qvec_key(p)));
}

TEST_CASE("support-restricted vertices") {
    const Scenario s22 = Scenario::parse("[2,2|2,2]");
    CHECK(nary_support_vertices(s22, 2).points == ns_vertices(s22).points);
    CHECK_THROWS_AS(nary_support_vertices(s22, 1), Error);

    const Scenario t = Scenario::parse("[2,3|2,3]");
    const VRep v2 = nary_support_vertices(t, 2);
    for (const QVec& p : v2.points) {
        const CorrelationVector c(t, p);
        CHECK(is_nonsignaling(c));
        // At most two outcomes with nonzero marginal per setting per party.
        for (int x = 0; x < t.alice_settings(); ++x) {
            int live = 0;
            for (int a = 0; a < t.alice_outcomes(x); ++a)
                if (c.alice_marginal(a, x, 0) != 0) ++live;
            CHECK(live <= 2);
        }
        for (int y = 0; y < t.bob_settings(); ++y) {
            int live = 0;
            for (int b = 0; b < t.bob_outcomes(y); ++b)
                if (c.bob_marginal(b, y, 0) != 0) ++live;
            CHECK(live <= 2);
        }
    }

    // Arity cap at the scenario's own outcome counts is no restriction at all.
    CHECK(nary_support_vertices(t, 3).points == ns_vertices(t).points);

    // Monotonicity: binary-support points lie in the ternary-support hull.
    const VRep v3 = ns_vertices(t);
    for (std::size_t i = 0; i < v2.points.size(); i += 9) CHECK(member(v2.points[i], v3));
}

TEST_CASE("wiring construction equals support construction for binary bases") {
    const Scenario base = Scenario::parse("[2,2|2,2]");
    const Scenario target = Scenario::parse("[2,3|2,2]");
    const VRep via_wiring = restricted_vertices(base, target);
    const VRep via_support = nary_support_vertices(target, 2);
    CHECK(polytope_equal(via_wiring, via_support));
}
