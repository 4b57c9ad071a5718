#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bellkit/error.hpp"
#include "bellkit/linalg.hpp"
#include "bellkit/rational.hpp"

namespace bellkit {
namespace dd {

/// Extreme rays of the pointed polyhedral cone { z : row . z <= 0 } by the
/// double description method. Rows are processed in the order given; callers
/// that need reproducible output sort them beforehand. Rays are primitive
/// integer vectors, unordered.
///
/// Adjacency of rays is decided combinatorially: p and m are adjacent iff no
/// third ray is tight on every constraint both are tight on. Tight sets are
/// maintained incrementally over fixed-width bit arrays (one slot per row
/// that ever touched a ray), which is exact because a combined ray
/// s_p z_m - s_m z_p is tight on a past row exactly when both parents are.
/// Three filters keep the quadratic pair loop affordable: a ray pair needs
/// min(|tight_p|, |tight_m|) >= dim-2 before any words are read, the fused
/// intersection popcount aborts once dim-2 becomes unreachable, and witness
/// candidates need a tight count at least as large as the intersection.
///
/// Constraint slots are allocated lazily: a row that is strictly slack on
/// every ray when processed can never become tight on any later ray (new rays
/// are positive combinations of current ones), so it never needs a slot.
///
/// Throws Error when the cone is not pointed (rows do not span), since then
/// extreme rays do not exist. A nonzero `max_live` bounds the number of rays
/// alive at once; exceeding it raises EnumerationOverflowError so callers can
/// abandon a blowing-up run early and try something else.
inline std::vector<ZVec> extreme_rays(const std::vector<ZVec>& rows, int dim,
                                      std::size_t max_live = 0) {
    if (dim <= 0) throw Error("extreme_rays needs a positive dimension");

    // Initial simplicial cone from the first dim linearly independent rows,
    // found by incremental elimination against the accumulated echelon rows.
    std::vector<int> init;
    {
        QMat echelon;             // rows in echelon form
        std::vector<int> pivots;  // pivot column per echelon row
        for (std::size_t i = 0; i < rows.size() && static_cast<int>(init.size()) < dim; ++i) {
            QVec w = to_rational(rows[i]);
            for (std::size_t r = 0; r < echelon.size(); ++r)
                if (w[pivots[r]] != 0) {
                    const Rational f = w[pivots[r]];
                    for (int j = 0; j < dim; ++j) w[j] -= f * echelon[r][j];
                }
            int pc = -1;
            for (int j = 0; j < dim; ++j)
                if (w[j] != 0) {
                    pc = j;
                    break;
                }
            if (pc < 0) continue;
            const Rational f = w[pc];
            for (int j = 0; j < dim; ++j) w[j] /= f;
            echelon.push_back(std::move(w));
            pivots.push_back(pc);
            init.push_back(static_cast<int>(i));
        }
        if (static_cast<int>(init.size()) < dim)
            throw Error("cone is not pointed: constraint rows do not span the space");
    }

    const std::size_t words = (rows.size() + 63) >> 6; // slot capacity

    struct Ray {
        ZVec z;
        std::vector<std::uint64_t> tight; // fixed width, indexed by slot
        std::size_t tcount = 0;
    };

    QMat ak(dim, QVec(dim));
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) ak[i][j] = Rational(rows[init[i]][j]);
    QMat inv;
    if (!invert(ak, inv)) throw Error("independent rows failed to invert");

    std::vector<Ray> rays(dim);
    std::size_t slots = 0; // next free constraint slot
    std::vector<std::size_t> slot_of_row(rows.size(), SIZE_MAX);
    for (int i = 0; i < dim; ++i) slot_of_row[init[i]] = slots++;
    for (int j = 0; j < dim; ++j) {
        QVec col(dim);
        for (int i = 0; i < dim; ++i) col[i] = -inv[i][j]; // row_{init[i]} . ray_j = -delta_ij
        rays[j].z = to_primitive_integer(col);
        rays[j].tight.assign(words, 0);
        for (int i = 0; i < dim; ++i)
            if (i != j) {
                const std::size_t slot = slot_of_row[init[i]];
                rays[j].tight[slot >> 6] |= std::uint64_t(1) << (slot & 63);
            }
        rays[j].tcount = static_cast<std::size_t>(dim - 1);
    }

    const std::size_t min_shared = dim >= 2 ? static_cast<std::size_t>(dim - 2) : 0;
    std::vector<Int> s; // per-ray value of the row being inserted
    std::vector<int> plus, minus, zero;
    std::vector<std::uint64_t> shared(words);
    for (std::size_t ri = 0; ri < rows.size(); ++ri) {
        if (slot_of_row[ri] != SIZE_MAX) continue; // part of the initial basis
        const ZVec& a = rows[ri];
        s.assign(rays.size(), Int(0));
        plus.clear();
        minus.clear();
        zero.clear();
        for (std::size_t k = 0; k < rays.size(); ++k) {
            s[k] = dot(a, rays[k].z);
            if (s[k] > 0)
                plus.push_back(static_cast<int>(k));
            else if (s[k] < 0)
                minus.push_back(static_cast<int>(k));
            else
                zero.push_back(static_cast<int>(k));
        }
        if (plus.empty() && zero.empty()) continue; // strictly slack forever
        const std::size_t slot = slots++;
        const std::size_t slot_word = slot >> 6;
        const std::uint64_t slot_bit = std::uint64_t(1) << (slot & 63);
        for (int k : zero) {
            rays[k].tight[slot_word] |= slot_bit;
            ++rays[k].tcount;
        }
        if (plus.empty()) continue;

        const std::size_t wu = (slots + 63) >> 6; // words in use so far
        std::vector<Ray> created;
        for (int p : plus) {
            const std::uint64_t* tp = rays[p].tight.data();
            const std::size_t tcp = rays[p].tcount;
            if (tcp < min_shared) continue;
            for (int m : minus) {
                if (rays[m].tcount < min_shared) continue;
                const std::uint64_t* tm = rays[m].tight.data();
                std::size_t cnt = 0;
                bool enough = true;
                for (std::size_t w = 0; w < wu; ++w) {
                    shared[w] = tp[w] & tm[w];
                    cnt += static_cast<std::size_t>(__builtin_popcountll(shared[w]));
                    if (cnt + ((wu - w - 1) << 6) < min_shared) {
                        enough = false;
                        break;
                    }
                }
                if (!enough || cnt < min_shared) continue;
                bool adjacent = true;
                for (std::size_t k = 0; k < rays.size(); ++k) {
                    if (static_cast<int>(k) == p || static_cast<int>(k) == m) continue;
                    if (rays[k].tcount < cnt) continue;
                    const std::uint64_t* tk = rays[k].tight.data();
                    bool superset = true;
                    for (std::size_t w = 0; w < wu; ++w)
                        if (shared[w] & ~tk[w]) {
                            superset = false;
                            break;
                        }
                    if (superset) {
                        adjacent = false;
                        break;
                    }
                }
                if (!adjacent) continue;
                Ray nr;
                nr.z.resize(dim);
                for (int j = 0; j < dim; ++j) nr.z[j] = s[p] * rays[m].z[j] - s[m] * rays[p].z[j];
                make_primitive(nr.z);
                nr.tight.assign(words, 0);
                for (std::size_t w = 0; w < wu; ++w) nr.tight[w] = shared[w];
                nr.tight[slot_word] |= slot_bit;
                nr.tcount = cnt + 1;
                created.push_back(std::move(nr));
            }
        }

        std::vector<Ray> next;
        next.reserve(minus.size() + zero.size() + created.size());
        for (std::size_t k = 0; k < rays.size(); ++k)
            if (s[k] <= 0) next.push_back(std::move(rays[k]));
        for (Ray& r : created) next.push_back(std::move(r));
        rays = std::move(next);
        if (max_live != 0 && rays.size() > max_live)
            throw EnumerationOverflowError("double description exceeded " +
                                           std::to_string(max_live) + " live rays");
    }

    std::vector<ZVec> out;
    out.reserve(rays.size());
    for (Ray& r : rays) out.push_back(std::move(r.z));
    return out;
}

} // namespace dd
} // namespace bellkit
