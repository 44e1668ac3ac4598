#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "degpat/core.hpp"
#include "degpat/enumeration.hpp"
#include "degpat/graph.hpp"
#include "degpat/witness_index.hpp"

namespace degpat {

// Certified half-ladder of size k: a candidate set A' of size k together
// with one witness per level, where level masks run from the empty set up
// to the full A' and level i's witness has exact neighborhood A'_i inside
// A'. Witnesses are taken outside A', which makes the certificate a real
// embedded ladder L_k.
struct LadderResult {
    std::uint32_t k = 0;
    std::vector<VertexId> universe; // A', sorted by rank

    struct Level {
        std::uint32_t mask;
        VertexId witness;
    };
    std::vector<Level> levels; // k+1 levels, nested masks of sizes 0..k
};

namespace detail {

// Nested all-positive mask chain from the full universe down to the empty
// set; memoized descent removing one element per level. Returns the masks
// in increasing size, or nothing.
inline std::optional<std::vector<std::uint32_t>> chain_masks(std::span<const std::int64_t> counts,
                                                             std::size_t k) {
    std::uint32_t full = (k >= 32) ? 0 : ((1u << k) - 1u);
    if (k >= 32) throw CapacityError("chain search limited to 31 elements");
    std::vector<std::int8_t> memo(std::size_t(1) << k, -1); // -1 unknown, 0 no, 1 yes
    auto rec = [&](auto&& self, std::uint32_t mask) -> bool {
        if (memo[mask] >= 0) return memo[mask] == 1;
        bool ok = counts[mask] > 0;
        if (ok && mask != 0) {
            ok = false;
            for (std::uint32_t m = mask; m; m &= m - 1) {
                std::uint32_t bit = m & (~m + 1);
                if (self(self, mask ^ bit)) {
                    ok = true;
                    break;
                }
            }
        }
        memo[mask] = ok ? 1 : 0;
        return ok;
    };
    if (!rec(rec, full)) return std::nullopt;

    std::vector<std::uint32_t> chain;
    std::uint32_t cur = full;
    chain.push_back(cur);
    while (cur != 0) {
        for (std::uint32_t m = cur; m; m &= m - 1) {
            std::uint32_t bit = m & (~m + 1);
            if (memo[cur ^ bit] == 1) {
                cur ^= bit;
                break;
            }
        }
        chain.push_back(cur);
    }
    std::reverse(chain.begin(), chain.end());
    return chain;
}

} // namespace detail

// Looks for a full nested chain in Q after discarding the universe's own
// traces, then binds one non-universe witness to every level.
inline std::optional<std::vector<LadderResult::Level>> chain_exists(const Graph& g,
                                                                    const ExactNeighborhoodTable& q) {
    std::size_t k = q.universe.size();
    std::vector<std::int64_t> adjusted(q.table.values());
    for (std::size_t i = 0; i < k; ++i) {
        std::uint32_t mask = 0;
        for (std::size_t j = 0; j < k; ++j)
            if (j != i && g.has_edge(q.universe[i], q.universe[j])) mask |= 1u << j;
        adjusted[mask] -= 1;
    }
    auto masks = detail::chain_masks(adjusted, k);
    if (!masks) return std::nullopt;

    std::vector<LadderResult::Level> levels;
    for (std::uint32_t mask : *masks) {
        VertexId found = 0;
        bool ok = false;
        for (VertexId v = 0; v < g.num_vertices() && !ok; ++v) {
            bool in_universe = false;
            std::uint32_t trace = 0;
            for (std::size_t j = 0; j < k; ++j) {
                if (q.universe[j] == v) {
                    in_universe = true;
                    break;
                }
                if (g.has_edge(v, q.universe[j])) trace |= 1u << j;
            }
            if (!in_universe && trace == mask) {
                found = v;
                ok = true;
            }
        }
        if (!ok) return std::nullopt; // cannot happen: adjusted counts were positive
        levels.push_back({mask, found});
    }
    return levels;
}

// Factor-2 ladder-index approximation: for every vertex u and every
// A' <= N^-(u), by decreasing size with best-so-far pruning, check the
// nested chain condition via Q_{A'}.
inline LadderResult ladder_approx(const Graph& g, RunBudget* budget = nullptr) {
    LadderResult res;
    std::size_t n = g.num_vertices();
    if (n == 0) return res;
    OrderedGraph og = degeneracy_order(g);
    std::uint32_t d = og.degeneracy();
    if (d == 0) return res;

    LeftSubsetCounter r = build_R(og, d, budget);

    std::vector<VertexId> A;
    for (VertexId u = 0; u < n; ++u) {
        budget_check(budget);
        const auto& left = og.left_neighbors(u); // rank-sorted
        for (std::size_t m = left.size(); m > res.k; --m) {
            bool improved = false;
            detail::for_each_combination(left.size(), m, [&](std::span<const std::uint32_t> comb) {
                budget_check(budget);
                A.clear();
                for (std::uint32_t i : comb) A.push_back(left[i]);
                ExactNeighborhoodTable q = build_Q(og, r, A);
                auto levels = chain_exists(g, q);
                if (levels) {
                    res.k = static_cast<std::uint32_t>(m);
                    res.universe = A;
                    res.levels = std::move(*levels);
                    improved = true;
                    return false;
                }
                return true;
            });
            if (improved) break; // smaller A' under this u cannot beat res.k
        }
    }
    return res;
}

// The explicit ladder embedding behind a certificate: a_i ~ b_j iff i > j
// (1-based). a-side comes from the chain's difference elements, b-side from
// the level witnesses below the top.
struct LadderEmbedding {
    std::vector<VertexId> a_side;
    std::vector<VertexId> b_side;
};

inline LadderEmbedding ladder_embedding(const LadderResult& r) {
    LadderEmbedding emb;
    std::uint32_t k = r.k;
    if (k == 0) return emb;
    // f[i] = element entering the chain at level i+1 (masks grow by one bit)
    std::vector<VertexId> f(k);
    for (std::uint32_t i = 0; i + 1 < r.levels.size(); ++i) {
        std::uint32_t delta = r.levels[i + 1].mask ^ r.levels[i].mask;
        f[i] = r.universe[std::countr_zero(delta)];
    }
    emb.a_side.resize(k);
    emb.b_side.resize(k);
    for (std::uint32_t alpha = 1; alpha <= k; ++alpha) emb.a_side[alpha - 1] = f[k - alpha];
    for (std::uint32_t j = 1; j <= k; ++j) emb.b_side[j - 1] = r.levels[k - j].witness;
    return emb;
}

} // namespace degpat
