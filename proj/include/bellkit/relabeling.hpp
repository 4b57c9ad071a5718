#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

#include "bellkit/correlation.hpp"
#include "bellkit/functional.hpp"
#include "bellkit/scenario.hpp"

namespace bellkit {

/// Symmetry of a scenario: optional party swap (party-symmetric scenarios
/// only), setting permutations preserving outcome counts, and an outcome
/// permutation per setting. The action on a table is
///   (g P)(s_A[x], s_B[y], o_A[x][a], o_B[y][b]) = P(x, y, a, b),
/// applied after the party swap when swap is set. Outcome permutations are
/// indexed by the setting they pick their input from.
struct Relabeling {
    bool party_swap = false;
    std::vector<int> alice_setting, bob_setting;            // x -> new setting index
    std::vector<std::vector<int>> alice_outcome, bob_outcome; // [x][a] -> new outcome

    static Relabeling identity(const Scenario& s) {
        Relabeling g;
        g.alice_setting.resize(s.alice_settings());
        std::iota(g.alice_setting.begin(), g.alice_setting.end(), 0);
        g.bob_setting.resize(s.bob_settings());
        std::iota(g.bob_setting.begin(), g.bob_setting.end(), 0);
        for (int x = 0; x < s.alice_settings(); ++x) {
            std::vector<int> p(s.alice_outcomes(x));
            std::iota(p.begin(), p.end(), 0);
            g.alice_outcome.push_back(std::move(p));
        }
        for (int y = 0; y < s.bob_settings(); ++y) {
            std::vector<int> p(s.bob_outcomes(y));
            std::iota(p.begin(), p.end(), 0);
            g.bob_outcome.push_back(std::move(p));
        }
        return g;
    }
};

namespace detail {

inline bool is_permutation_of_size(const std::vector<int>& p, int n) {
    if (static_cast<int>(p.size()) != n) return false;
    std::vector<bool> hit(n, false);
    for (int v : p) {
        if (v < 0 || v >= n || hit[v]) return false;
        hit[v] = true;
    }
    return true;
}

} // namespace detail

inline void validate_relabeling(const Relabeling& g, const Scenario& s) {
    if (g.party_swap && !s.party_symmetric())
        throw ScenarioMismatchError("party swap needs a party-symmetric scenario");
    if (!detail::is_permutation_of_size(g.alice_setting, s.alice_settings()) ||
        !detail::is_permutation_of_size(g.bob_setting, s.bob_settings()))
        throw ScenarioMismatchError("setting permutation is not a bijection");
    for (int x = 0; x < s.alice_settings(); ++x) {
        if (s.alice_outcomes(g.alice_setting[x]) != s.alice_outcomes(x))
            throw ScenarioMismatchError("setting permutation changes an outcome count");
        if (!detail::is_permutation_of_size(g.alice_outcome[x], s.alice_outcomes(x)))
            throw ScenarioMismatchError("outcome permutation is not a bijection");
    }
    for (int y = 0; y < s.bob_settings(); ++y) {
        if (s.bob_outcomes(g.bob_setting[y]) != s.bob_outcomes(y))
            throw ScenarioMismatchError("setting permutation changes an outcome count");
        if (!detail::is_permutation_of_size(g.bob_outcome[y], s.bob_outcomes(y)))
            throw ScenarioMismatchError("outcome permutation is not a bijection");
    }
}

/// Flat index permutation of the action: entry i of a table or coefficient
/// vector moves to position perm[i].
inline std::vector<int> index_permutation(const Scenario& s, const Relabeling& g) {
    validate_relabeling(g, s);
    std::vector<int> perm(s.dim());
    for (int x = 0; x < s.alice_settings(); ++x)
        for (int y = 0; y < s.bob_settings(); ++y)
            for (int a = 0; a < s.alice_outcomes(x); ++a)
                for (int b = 0; b < s.bob_outcomes(y); ++b) {
                    int xs = x, ys = y, as = a, bs = b;
                    if (g.party_swap) {
                        std::swap(xs, ys);
                        std::swap(as, bs);
                    }
                    perm[s.index(x, y, a, b)] = s.index(
                        g.alice_setting[xs], g.bob_setting[ys], g.alice_outcome[xs][as],
                        g.bob_outcome[ys][bs]);
                }
    return perm;
}

inline BellFunctional apply_relabeling(const Relabeling& g, const BellFunctional& f) {
    const std::vector<int> perm = index_permutation(f.scenario, g);
    QVec out(f.coeff.size());
    for (std::size_t i = 0; i < perm.size(); ++i) out[perm[i]] = f.coeff[i];
    return BellFunctional(f.scenario, std::move(out), f.bound, f.kind, f.arity);
}

inline CorrelationVector apply_relabeling(const Relabeling& g, const CorrelationVector& t) {
    const std::vector<int> perm = index_permutation(t.scenario, g);
    QVec out(t.values.size());
    for (std::size_t i = 0; i < perm.size(); ++i) out[perm[i]] = t.values[i];
    return CorrelationVector(t.scenario, std::move(out));
}

/// g then h... careful: compose(g, h) acts as "h first, then g".
inline Relabeling compose(const Relabeling& g, const Relabeling& h) {
    Relabeling hh = h;
    if (g.party_swap) {
        std::swap(hh.alice_setting, hh.bob_setting);
        std::swap(hh.alice_outcome, hh.bob_outcome);
    }
    Relabeling out;
    out.party_swap = g.party_swap != h.party_swap;
    const int mA = static_cast<int>(hh.alice_setting.size());
    const int mB = static_cast<int>(hh.bob_setting.size());
    out.alice_setting.resize(mA);
    out.bob_setting.resize(mB);
    out.alice_outcome.resize(mA);
    out.bob_outcome.resize(mB);
    for (int x = 0; x < mA; ++x) {
        out.alice_setting[x] = g.alice_setting[hh.alice_setting[x]];
        const auto& first = hh.alice_outcome[x];
        const auto& second = g.alice_outcome[hh.alice_setting[x]];
        std::vector<int> p(first.size());
        for (std::size_t a = 0; a < first.size(); ++a) p[a] = second[first[a]];
        out.alice_outcome[x] = std::move(p);
    }
    for (int y = 0; y < mB; ++y) {
        out.bob_setting[y] = g.bob_setting[hh.bob_setting[y]];
        const auto& first = hh.bob_outcome[y];
        const auto& second = g.bob_outcome[hh.bob_setting[y]];
        std::vector<int> p(first.size());
        for (std::size_t b = 0; b < first.size(); ++b) p[b] = second[first[b]];
        out.bob_outcome[y] = std::move(p);
    }
    return out;
}

inline Relabeling inverse(const Relabeling& g) {
    Relabeling out;
    out.party_swap = g.party_swap;
    const int mA = static_cast<int>(g.alice_setting.size());
    const int mB = static_cast<int>(g.bob_setting.size());
    out.alice_setting.resize(mA);
    out.alice_outcome.resize(mA);
    out.bob_setting.resize(mB);
    out.bob_outcome.resize(mB);
    for (int x = 0; x < mA; ++x) {
        out.alice_setting[g.alice_setting[x]] = x;
        std::vector<int> p(g.alice_outcome[x].size());
        for (std::size_t a = 0; a < p.size(); ++a) p[g.alice_outcome[x][a]] = static_cast<int>(a);
        out.alice_outcome[g.alice_setting[x]] = std::move(p);
    }
    for (int y = 0; y < mB; ++y) {
        out.bob_setting[g.bob_setting[y]] = y;
        std::vector<int> p(g.bob_outcome[y].size());
        for (std::size_t b = 0; b < p.size(); ++b) p[g.bob_outcome[y][b]] = static_cast<int>(b);
        out.bob_outcome[g.bob_setting[y]] = std::move(p);
    }
    if (g.party_swap) {
        std::swap(out.alice_setting, out.bob_setting);
        std::swap(out.alice_outcome, out.bob_outcome);
    }
    return out;
}

/// The full relabeling group of a scenario, with flat index permutations
/// precomputed. Sizes stay modest for the scenarios in scope; a guard trips
/// on anything that would not.
struct RelabelingGroup {
    Scenario scenario;
    bool with_party_swap = false;
    std::vector<Relabeling> elements;
    std::vector<std::vector<int>> perms;

    std::size_t size() const { return elements.size(); }
};

namespace detail {

/// Permutations of {0..n-1} mapping each index to one with equal outcome count.
inline std::vector<std::vector<int>> count_preserving_permutations(const std::vector<int>& counts) {
    std::vector<int> idx(counts.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        bool ok = true;
        for (std::size_t i = 0; i < counts.size(); ++i)
            if (counts[idx[i]] != counts[i]) {
                ok = false;
                break;
            }
        if (ok) out.push_back(idx);
    } while (std::next_permutation(idx.begin(), idx.end()));
    return out;
}

inline std::vector<std::vector<int>> all_permutations(int n) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(idx);
    } while (std::next_permutation(idx.begin(), idx.end()));
    return out;
}

} // namespace detail

inline RelabelingGroup relabeling_group(const Scenario& s, bool include_party_swap = true) {
    const bool swap_ok = include_party_swap && s.party_symmetric();
    const auto sperm_a = detail::count_preserving_permutations(s.alice());
    const auto sperm_b = detail::count_preserving_permutations(s.bob());
    std::vector<std::vector<std::vector<int>>> operm_a, operm_b;
    for (int x = 0; x < s.alice_settings(); ++x)
        operm_a.push_back(detail::all_permutations(s.alice_outcomes(x)));
    for (int y = 0; y < s.bob_settings(); ++y)
        operm_b.push_back(detail::all_permutations(s.bob_outcomes(y)));

    double total = static_cast<double>(sperm_a.size()) * sperm_b.size() * (swap_ok ? 2 : 1);
    for (const auto& v : operm_a) total *= v.size();
    for (const auto& v : operm_b) total *= v.size();
    if (total > 2.0e6)
        throw Error("relabeling group too large to enumerate: about " + std::to_string(total));

    RelabelingGroup grp{s, swap_ok, {}, {}};
    grp.elements.reserve(static_cast<std::size_t>(total));

    std::vector<std::size_t> oa(s.alice_settings(), 0), ob(s.bob_settings(), 0);
    for (int swap = 0; swap <= (swap_ok ? 1 : 0); ++swap)
        for (const auto& sa : sperm_a)
            for (const auto& sb : sperm_b) {
                std::fill(oa.begin(), oa.end(), 0);
                for (;;) {
                    std::fill(ob.begin(), ob.end(), 0);
                    for (;;) {
                        Relabeling g;
                        g.party_swap = swap != 0;
                        g.alice_setting = sa;
                        g.bob_setting = sb;
                        for (int x = 0; x < s.alice_settings(); ++x)
                            g.alice_outcome.push_back(operm_a[x][oa[x]]);
                        for (int y = 0; y < s.bob_settings(); ++y)
                            g.bob_outcome.push_back(operm_b[y][ob[y]]);
                        grp.elements.push_back(std::move(g));
                        int k = s.bob_settings();
                        while (k > 0 && ++ob[k - 1] == operm_b[k - 1].size()) ob[--k] = 0;
                        if (k == 0) break;
                    }
                    int k = s.alice_settings();
                    while (k > 0 && ++oa[k - 1] == operm_a[k - 1].size()) oa[--k] = 0;
                    if (k == 0) break;
                }
            }

    grp.perms.reserve(grp.elements.size());
    for (const Relabeling& g : grp.elements) grp.perms.push_back(index_permutation(s, g));
    return grp;
}

/// Generating set (party swap, setting transpositions within equal-count
/// classes, adjacent outcome transpositions); used to walk orbits cheaply.
inline std::vector<Relabeling> relabeling_generators(const Scenario& s,
                                                     bool include_party_swap = true) {
    std::vector<Relabeling> gens;
    if (include_party_swap && s.party_symmetric()) {
        Relabeling g = Relabeling::identity(s);
        g.party_swap = true;
        gens.push_back(std::move(g));
    }
    for (int x = 0; x + 1 < s.alice_settings(); ++x)
        for (int x2 = x + 1; x2 < s.alice_settings(); ++x2)
            if (s.alice_outcomes(x) == s.alice_outcomes(x2)) {
                Relabeling g = Relabeling::identity(s);
                std::swap(g.alice_setting[x], g.alice_setting[x2]);
                gens.push_back(std::move(g));
            }
    for (int y = 0; y + 1 < s.bob_settings(); ++y)
        for (int y2 = y + 1; y2 < s.bob_settings(); ++y2)
            if (s.bob_outcomes(y) == s.bob_outcomes(y2)) {
                Relabeling g = Relabeling::identity(s);
                std::swap(g.bob_setting[y], g.bob_setting[y2]);
                gens.push_back(std::move(g));
            }
    for (int x = 0; x < s.alice_settings(); ++x)
        for (int a = 0; a + 1 < s.alice_outcomes(x); ++a) {
            Relabeling g = Relabeling::identity(s);
            std::swap(g.alice_outcome[x][a], g.alice_outcome[x][a + 1]);
            gens.push_back(std::move(g));
        }
    for (int y = 0; y < s.bob_settings(); ++y)
        for (int b = 0; b + 1 < s.bob_outcomes(y); ++b) {
            Relabeling g = Relabeling::identity(s);
            std::swap(g.bob_outcome[y][b], g.bob_outcome[y][b + 1]);
            gens.push_back(std::move(g));
        }
    return gens;
}

namespace detail {

inline ZVec permute_reduce_key(const CollinsGisin& cg, const std::vector<int>& perm,
                               const QVec& coeff, const Rational& bound) {
    QVec pc(coeff.size());
    for (std::size_t i = 0; i < perm.size(); ++i) pc[perm[i]] = coeff[i];
    return reduced_integer_key(cg, pc, bound);
}

} // namespace detail

/// Canonical representative of the relabeling orbit: the lexicographically
/// smallest gauge-reduced, gcd-normalized (coefficients, bound) vector over
/// the whole group. Brute force over the group, which stays small here.
inline BellFunctional canonical_form(const BellFunctional& f, const RelabelingGroup& grp) {
    if (grp.scenario != f.scenario)
        throw ScenarioMismatchError("group and functional scenarios differ");
    const CollinsGisin cg(f.scenario);
    ZVec best;
    for (const auto& perm : grp.perms) {
        ZVec key = detail::permute_reduce_key(cg, perm, f.coeff, f.bound);
        if (best.empty() || lex_compare(key, best) < 0) best = std::move(key);
    }
    QVec coeff(best.begin(), best.end() - 1);
    return BellFunctional(f.scenario, std::move(coeff), Rational(best.back()), f.kind, f.arity);
}

inline BellFunctional canonical_form(const BellFunctional& f, bool include_party_swap = true) {
    return canonical_form(f, relabeling_group(f.scenario, include_party_swap));
}

struct Orbit {
    BellFunctional canonical;
    int multiplicity = 0;
};

/// Groups functionals by relabeling orbit. Inputs are first merged by their
/// gauge-reduced key, then linked by generator moves inside the input set
/// (which resolves everything when the input is closed under the group, as a
/// facet list of a symmetric polytope is), and finally components are merged
/// by the brute-force canonical form of one representative each, so the
/// result is exact for arbitrary inputs too. Orbits are ordered by canonical
/// key; multiplicities count input entries.
inline std::vector<Orbit> orbit_classify(const std::vector<BellFunctional>& fs,
                                         const RelabelingGroup& grp) {
    std::vector<Orbit> out;
    if (fs.empty()) return out;
    const Scenario& s = grp.scenario;
    for (const auto& f : fs)
        if (f.scenario != s) throw ScenarioMismatchError("orbit input scenario mismatch");
    const CollinsGisin cg(s);

    std::map<ZVec, int> node_of_key;
    std::vector<ZVec> node_key;
    std::vector<int> weight;
    std::vector<const BellFunctional*> node_rep;
    for (const auto& f : fs) {
        ZVec key = reduced_integer_key(cg, f.coeff, f.bound);
        auto [it, fresh] = node_of_key.try_emplace(std::move(key), static_cast<int>(node_key.size()));
        if (fresh) {
            node_key.push_back(it->first);
            weight.push_back(0);
            node_rep.push_back(&f);
        }
        ++weight[it->second];
    }

    std::vector<int> parent(node_key.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    auto unite = [&](int i, int j) { parent[find(i)] = find(j); };

    std::vector<std::vector<int>> gen_perms;
    for (const Relabeling& g : relabeling_generators(s, grp.with_party_swap))
        gen_perms.push_back(index_permutation(s, g));
    for (std::size_t i = 0; i < node_key.size(); ++i) {
        QVec coeff(node_key[i].begin(), node_key[i].end() - 1);
        const Rational bound(node_key[i].back());
        for (const auto& perm : gen_perms) {
            ZVec img = detail::permute_reduce_key(cg, perm, coeff, bound);
            auto it = node_of_key.find(img);
            if (it != node_of_key.end()) unite(static_cast<int>(i), it->second);
        }
    }

    std::map<ZVec, Orbit> merged;
    std::vector<bool> component_done(node_key.size(), false);
    for (std::size_t i = 0; i < node_key.size(); ++i) {
        const int root = find(static_cast<int>(i));
        if (!component_done[root]) {
            const BellFunctional canon = canonical_form(*node_rep[root], grp);
            QVec joint = canon.coeff;
            joint.push_back(canon.bound);
            ZVec ckey = to_primitive_integer(joint);
            auto it = merged.find(ckey);
            if (it == merged.end()) it = merged.emplace(std::move(ckey), Orbit{canon, 0}).first;
            component_done[root] = true;
            node_key[root] = it->first; // remember which orbit the root maps to
        }
    }
    // Second pass: add weights now that every component root knows its orbit.
    for (std::size_t i = 0; i < node_key.size(); ++i) {
        const int root = find(static_cast<int>(i));
        merged.at(node_key[root]).multiplicity += weight[i];
    }

    for (auto& [key, orbit] : merged) out.push_back(std::move(orbit));
    return out;
}

inline std::vector<Orbit> orbit_classify(const std::vector<BellFunctional>& fs,
                                         bool include_party_swap = true) {
    if (fs.empty()) return {};
    return orbit_classify(fs, relabeling_group(fs[0].scenario, include_party_swap));
}

} // namespace bellkit
