#pragma once

#include <cstdint>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bellkit/correlation.hpp"
#include "bellkit/hull.hpp"
#include "bellkit/scenario.hpp"

namespace bellkit {

enum class Party { alice, bob };

/// One target measurement simulated from the base box: measure `source` and
/// push each outcome a through map[a] to a target outcome.
struct OutcomeMap {
    int source = 0;
    std::vector<int> map;
};

/// Deterministic local postprocessing strategy for one party: every target
/// setting uses the base box once, with its own source setting and outcome
/// coarse-graining. Shared randomness is supplied later by taking convex
/// hulls, so deterministic strategies are all that need enumerating.
struct DeterministicWiring {
    Party party;
    Scenario source;
    Scenario target;
    std::vector<OutcomeMap> per_target;

    DeterministicWiring(Party p, Scenario src, Scenario tgt, std::vector<OutcomeMap> maps)
        : party(p), source(std::move(src)), target(std::move(tgt)), per_target(std::move(maps)) {}
};

namespace detail {

inline const std::vector<int>& party_outcomes(const Scenario& s, Party p) {
    return p == Party::alice ? s.alice() : s.bob();
}

/// All (source setting, outcome map) options for one target setting with
/// o_target outcomes. Ordered by source setting, then lexicographically by
/// the outcome map read as digits.
inline std::vector<OutcomeMap> setting_options(const std::vector<int>& source_outcomes,
                                               int o_target) {
    std::vector<OutcomeMap> out;
    for (std::size_t x = 0; x < source_outcomes.size(); ++x) {
        const int o = source_outcomes[x];
        std::vector<int> digits(o, 0);
        for (;;) {
            out.push_back(OutcomeMap{static_cast<int>(x), digits});
            int i = o - 1;
            while (i >= 0 && ++digits[i] == o_target) digits[i--] = 0;
            if (i < 0) break;
        }
    }
    return out;
}

struct IntVecHash {
    std::size_t operator()(const std::vector<std::int32_t>& v) const {
        std::uint64_t h = 1469598103934665603ull;
        for (std::int32_t x : v) {
            h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(x));
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

} // namespace detail

/// Number of deterministic wirings for one party: a free choice per target
/// setting x' among sum_x o(x')^{o(x)} options.
inline long long count_wirings(const Scenario& s, const Scenario& s_target, Party party) {
    const auto& src = detail::party_outcomes(s, party);
    const auto& tgt = detail::party_outcomes(s_target, party);
    long long total = 1;
    for (int ot : tgt) {
        long long per_setting = 0;
        for (int os : src) {
            long long p = 1;
            for (int i = 0; i < os; ++i) p *= ot;
            per_setting += p;
        }
        total *= per_setting;
    }
    return total;
}

/// Materializes every deterministic wiring for one party. Guarded against
/// accidental blow-ups; the polytope pipeline never needs the full product
/// (see restricted_vertices), this is for tests, spot checks and small runs.
inline std::vector<DeterministicWiring> enumerate_wirings(const Scenario& s,
                                                          const Scenario& s_target, Party party) {
    const long long total = count_wirings(s, s_target, party);
    if (total > 2'000'000)
        throw Error("wiring enumeration too large to materialize: " + std::to_string(total));
    const auto& src = detail::party_outcomes(s, party);
    const auto& tgt = detail::party_outcomes(s_target, party);
    std::vector<std::vector<OutcomeMap>> options;
    for (int ot : tgt) options.push_back(detail::setting_options(src, ot));

    std::vector<DeterministicWiring> out;
    out.reserve(static_cast<std::size_t>(total));
    std::vector<std::size_t> idx(options.size(), 0);
    for (;;) {
        std::vector<OutcomeMap> maps;
        maps.reserve(options.size());
        for (std::size_t k = 0; k < options.size(); ++k) maps.push_back(options[k][idx[k]]);
        out.emplace_back(party, s, s_target, std::move(maps));
        std::size_t k = options.size();
        while (k > 0 && ++idx[k - 1] == options[k - 1].size()) idx[--k] = 0;
        if (k == 0) break;
    }
    return out;
}

/// Image of a no-signaling table under a pair of local wirings:
/// P'(a',b'|x',y') = sum over preimage outcomes of P(a,b|source x, source y).
inline CorrelationVector apply_wiring(const CorrelationVector& p, const DeterministicWiring& wa,
                                      const DeterministicWiring& wb) {
    if (wa.party != Party::alice || wb.party != Party::bob)
        throw ScenarioMismatchError("apply_wiring expects an Alice wiring and a Bob wiring");
    if (wa.source != p.scenario || wb.source != p.scenario)
        throw ScenarioMismatchError("wiring source scenario does not match the table");
    if (wa.target != wb.target)
        throw ScenarioMismatchError("Alice and Bob wirings target different scenarios");
    const Scenario& t = wa.target;
    const Scenario& s = p.scenario;
    CorrelationVector out(t);
    for (int xp = 0; xp < t.alice_settings(); ++xp) {
        const OutcomeMap& fa = wa.per_target[xp];
        for (int yp = 0; yp < t.bob_settings(); ++yp) {
            const OutcomeMap& fb = wb.per_target[yp];
            for (int a = 0; a < s.alice_outcomes(fa.source); ++a)
                for (int b = 0; b < s.bob_outcomes(fb.source); ++b)
                    out.p(xp, yp, fa.map[a], fb.map[b]) += p.p(fa.source, fb.source, a, b);
        }
    }
    return out;
}

/// Deduplicated images of the base scenario's no-signaling vertices under all
/// wiring pairs; their convex hull is the restricted polytope C(S -> S').
///
/// The wiring pair product is never enumerated directly. For a fixed base
/// vertex, the image block at (x', y') depends only on the effective
/// measurements chosen for x' and y', and distinct options frequently collapse
/// to the same effective measurement on that vertex. So per vertex we
/// deduplicate options into equivalence classes per target setting, register
/// every block table once in a global content table, and enumerate class
/// tuples; an image is just the matrix of content ids, deduplicated in a hash
/// set before any full table is materialized.
inline VRep restricted_vertices(const Scenario& base, const Scenario& target,
                                int threads = 1) {
    const VRep base_v = ns_vertices(base);
    const int mA = target.alice_settings(), mB = target.bob_settings();

    std::vector<std::vector<OutcomeMap>> opt_a, opt_b;
    for (int xp = 0; xp < mA; ++xp)
        opt_a.push_back(detail::setting_options(base.alice(), target.alice_outcomes(xp)));
    for (int yp = 0; yp < mB; ++yp)
        opt_b.push_back(detail::setting_options(base.bob(), target.bob_outcomes(yp)));

    std::mutex mu;
    std::unordered_map<std::string, std::int32_t> content_ids;
    std::vector<QVec> contents;
    std::unordered_set<std::vector<std::int32_t>, detail::IntVecHash> images;

    auto process_vertex = [&](const QVec& vert) {
        const CorrelationVector v(base, vert);
        // Alice option classes per target setting: two options are equivalent
        // on this vertex iff the coarse-grained table [a'; (y, b)] matches.
        struct AClass {
            OutcomeMap rep;
        };
        std::vector<std::vector<AClass>> aclasses(mA);
        std::size_t b_stride = 0; // one column per base (y, b)
        for (int y = 0; y < base.bob_settings(); ++y) b_stride += base.bob_outcomes(y);
        for (int xp = 0; xp < mA; ++xp) {
            std::unordered_set<std::string> seen;
            for (const OutcomeMap& om : opt_a[xp]) {
                // Layout: a' major, then (y, b) flat over the base Bob settings.
                const std::size_t stride = b_stride;
                QVec table(static_cast<std::size_t>(target.alice_outcomes(xp)) * stride,
                           Rational(0));
                for (int a = 0; a < base.alice_outcomes(om.source); ++a) {
                    std::size_t col = 0;
                    for (int y = 0; y < base.bob_settings(); ++y)
                        for (int b = 0; b < base.bob_outcomes(y); ++b, ++col)
                            table[om.map[a] * stride + col] += v.p(om.source, y, a, b);
                }
                if (seen.insert(qvec_key(table)).second) aclasses[xp].push_back(AClass{om});
            }
        }
        // Bob option classes per target setting, keeping the coarse-grained
        // content [x, a; b'], from which any pair block can be assembled.
        struct BClass {
            QVec content; // index: ((x, a) flat) * o_b' + b'
        };
        std::vector<std::vector<BClass>> bclasses(mB);
        std::size_t a_stride = 0;
        for (int x = 0; x < base.alice_settings(); ++x) a_stride += base.alice_outcomes(x);
        for (int yp = 0; yp < mB; ++yp) {
            const int obp = target.bob_outcomes(yp);
            std::unordered_set<std::string> seen;
            for (const OutcomeMap& om : opt_b[yp]) {
                QVec content(a_stride * obp, Rational(0));
                std::size_t rowbase = 0;
                for (int x = 0; x < base.alice_settings(); ++x) {
                    for (int a = 0; a < base.alice_outcomes(x); ++a) {
                        for (int b = 0; b < base.bob_outcomes(om.source); ++b)
                            content[(rowbase + a) * obp + om.map[b]] += v.p(x, om.source, a, b);
                    }
                    rowbase += base.alice_outcomes(x);
                }
                if (seen.insert(qvec_key(content)).second)
                    bclasses[yp].push_back(BClass{std::move(content)});
            }
        }

        // Pair block content ids for every (x', y', Alice class, Bob class).
        std::vector<int> a_rowbase(base.alice_settings(), 0);
        for (int x = 1; x < base.alice_settings(); ++x)
            a_rowbase[x] = a_rowbase[x - 1] + base.alice_outcomes(x - 1);
        std::vector<std::vector<std::vector<std::vector<std::int32_t>>>> pair_id(mA);
        for (int xp = 0; xp < mA; ++xp) {
            pair_id[xp].resize(mB);
            for (int yp = 0; yp < mB; ++yp) {
                const int oap = target.alice_outcomes(xp), obp = target.bob_outcomes(yp);
                pair_id[xp][yp].assign(aclasses[xp].size(),
                                       std::vector<std::int32_t>(bclasses[yp].size(), 0));
                for (std::size_t i = 0; i < aclasses[xp].size(); ++i) {
                    const OutcomeMap& om = aclasses[xp][i].rep;
                    for (std::size_t j = 0; j < bclasses[yp].size(); ++j) {
                        const QVec& c = bclasses[yp][j].content;
                        QVec block(static_cast<std::size_t>(oap) * obp, Rational(0));
                        for (int a = 0; a < base.alice_outcomes(om.source); ++a) {
                            const int row = a_rowbase[om.source] + a;
                            for (int bp = 0; bp < obp; ++bp)
                                block[om.map[a] * obp + bp] += c[row * obp + bp];
                        }
                        const std::string key = qvec_key(block);
                        std::lock_guard<std::mutex> lock(mu);
                        auto it = content_ids.find(key);
                        if (it == content_ids.end()) {
                            it = content_ids.emplace(key, static_cast<std::int32_t>(contents.size()))
                                     .first;
                            contents.push_back(std::move(block));
                        }
                        pair_id[xp][yp][i][j] = it->second;
                    }
                }
            }
        }

        // Enumerate class tuples; each image is its id matrix, flattened.
        std::vector<std::size_t> ia(mA, 0), ib(mB, 0);
        std::vector<std::int32_t> key(static_cast<std::size_t>(mA) * mB);
        for (;;) {
            for (;;) {
                for (int xp = 0; xp < mA; ++xp)
                    for (int yp = 0; yp < mB; ++yp)
                        key[xp * mB + yp] = pair_id[xp][yp][ia[xp]][ib[yp]];
                {
                    std::lock_guard<std::mutex> lock(mu);
                    images.insert(key);
                }
                int k = mB;
                while (k > 0 && ++ib[k - 1] == bclasses[k - 1].size()) ib[--k] = 0;
                if (k == 0) break;
            }
            int k = mA;
            while (k > 0 && ++ia[k - 1] == aclasses[k - 1].size()) ia[--k] = 0;
            if (k == 0) break;
        }
    };

    const int nthreads =
        std::max(1, std::min<int>(threads, static_cast<int>(base_v.points.size())));
    if (nthreads <= 1) {
        for (const QVec& vert : base_v.points) process_vertex(vert);
    } else {
        std::vector<std::thread> pool;
        std::size_t next = 0;
        std::mutex next_mu;
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&]() {
                for (;;) {
                    std::size_t i;
                    {
                        std::lock_guard<std::mutex> lock(next_mu);
                        if (next >= base_v.points.size()) return;
                        i = next++;
                    }
                    process_vertex(base_v.points[i]);
                }
            });
        for (auto& th : pool) th.join();
    }

    VRep out;
    out.dim = target.dim();
    out.points.reserve(images.size());
    for (const auto& key : images) {
        QVec table(target.dim(), Rational(0));
        for (int xp = 0; xp < mA; ++xp)
            for (int yp = 0; yp < mB; ++yp) {
                const QVec& block = contents[key[xp * mB + yp]];
                const int obp = target.bob_outcomes(yp);
                for (int ap = 0; ap < target.alice_outcomes(xp); ++ap)
                    for (int bp = 0; bp < obp; ++bp)
                        table[target.index(xp, yp, ap, bp)] = block[ap * obp + bp];
            }
        out.points.push_back(std::move(table));
    }
    sort_dedup_points(out.points);
    return out;
}

/// Vertices of the arity-limited no-signaling set: for every per-setting
/// choice of outcome supports of size min(n_max, outcomes), embed the vertices
/// of the support sub-scenario's no-signaling polytope with zeros outside the
/// support. The convex hull of the union is the fundamentally n-ary set.
inline VRep nary_support_vertices(const Scenario& target, int n_max, int threads = 1) {
    (void)threads;
    if (n_max < 2) throw Error("support arity must be at least 2");
    std::vector<int> sub_a, sub_b;
    for (int o : target.alice()) sub_a.push_back(std::min(n_max, o));
    for (int o : target.bob()) sub_b.push_back(std::min(n_max, o));
    const Scenario sub(sub_a, sub_b);
    const VRep sub_v = ns_vertices(sub);

    // Sorted k-subsets of {0..o-1} per setting per party.
    auto subsets = [](int o, int k) {
        std::vector<std::vector<int>> out;
        std::vector<int> pick(k);
        for (int i = 0; i < k; ++i) pick[i] = i;
        for (;;) {
            out.push_back(pick);
            int i = k - 1;
            while (i >= 0 && pick[i] == o - k + i) --i;
            if (i < 0) break;
            ++pick[i];
            for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
        }
        return out;
    };
    std::vector<std::vector<std::vector<int>>> ch_a, ch_b;
    for (int x = 0; x < target.alice_settings(); ++x)
        ch_a.push_back(subsets(target.alice_outcomes(x), sub_a[x]));
    for (int y = 0; y < target.bob_settings(); ++y)
        ch_b.push_back(subsets(target.bob_outcomes(y), sub_b[y]));

    std::unordered_set<std::string> seen;
    VRep out;
    out.dim = target.dim();
    std::vector<std::size_t> sel(ch_a.size() + ch_b.size(), 0);
    for (;;) {
        for (const QVec& pv : sub_v.points) {
            const CorrelationVector p(sub, pv);
            QVec table(target.dim(), Rational(0));
            for (int x = 0; x < target.alice_settings(); ++x) {
                const auto& sa = ch_a[x][sel[x]];
                for (int y = 0; y < target.bob_settings(); ++y) {
                    const auto& sb = ch_b[y][sel[ch_a.size() + y]];
                    for (int a = 0; a < sub.alice_outcomes(x); ++a)
                        for (int b = 0; b < sub.bob_outcomes(y); ++b)
                            table[target.index(x, y, sa[a], sb[b])] = p.p(x, y, a, b);
                }
            }
            if (seen.insert(qvec_key(table)).second) out.points.push_back(std::move(table));
        }
        std::size_t k = sel.size();
        auto limit = [&](std::size_t i) {
            return i < ch_a.size() ? ch_a[i].size() : ch_b[i - ch_a.size()].size();
        };
        while (k > 0 && ++sel[k - 1] == limit(k - 1)) sel[--k] = 0;
        if (k == 0) break;
    }
    sort_dedup_points(out.points);
    return out;
}

} // namespace bellkit
