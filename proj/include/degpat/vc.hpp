#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "degpat/core.hpp"
#include "degpat/enumeration.hpp"
#include "degpat/graph.hpp"
#include "degpat/witness_index.hpp"

namespace degpat {

enum class VcMode { Exact, Approx, Linear };

struct VcResult {
    std::uint32_t vc = 0;
    std::vector<VertexId> shattered_set;           // sorted by vertex id
    std::map<std::uint32_t, VertexId> witnesses;   // mask over shattered_set -> witness
    VcMode mode = VcMode::Exact;
    double epsilon = 1.0;
};

// All Q_S buckets positive; members of S are legitimate witnesses here.
inline bool is_shattered(const ExactNeighborhoodTable& q) {
    for (std::int64_t v : q.table.values())
        if (v <= 0) return false;
    return true;
}

// Direct-adjacency witness map for S; nullopt when S is not shattered.
// Mask bit i corresponds to S[i]. Fully independent of the Q machinery.
inline std::optional<std::map<std::uint32_t, VertexId>> shattering_witnesses(
    const Graph& g, std::span<const VertexId> S) {
    if (S.size() > 30) throw CapacityError("shattered-set check limited to 30 vertices");
    std::map<std::uint32_t, VertexId> wit;
    std::size_t want = std::size_t(1) << S.size();
    for (VertexId v = 0; v < g.num_vertices() && wit.size() < want; ++v) {
        std::uint32_t mask = 0;
        for (std::size_t i = 0; i < S.size(); ++i)
            if (g.has_edge(v, S[i])) mask |= 1u << i;
        wit.emplace(mask, v);
    }
    if (wit.size() < want) return std::nullopt;
    return wit;
}

// Degree-profile filter: a vertex of a shattered set of size k needs at
// least C(k-1, i-1) neighbors of degree >= i for every 1 <= i <= k-1.
// Single pass, no fixpoint iteration.
inline std::vector<VertexId> candidate_filter(const Graph& g, std::uint32_t k) {
    std::size_t n = g.num_vertices();
    std::vector<VertexId> out;
    if (k <= 1) {
        out.resize(n);
        std::iota(out.begin(), out.end(), 0);
        return out;
    }
    std::vector<std::uint32_t> deg(n);
    for (VertexId v = 0; v < n; ++v) deg[v] = static_cast<std::uint32_t>(g.degree(v));

    std::vector<double> need(k); // need[i] = C(k-1, i-1)
    for (std::uint32_t i = 1; i < k; ++i) need[i] = detail::binomial_estimate(k - 1, i - 1);

    std::vector<std::uint32_t> nbr_degs;
    for (VertexId v = 0; v < n; ++v) {
        nbr_degs.clear();
        for (VertexId u : g.neighbors(v)) nbr_degs.push_back(deg[u]);
        std::sort(nbr_degs.begin(), nbr_degs.end());
        bool ok = true;
        for (std::uint32_t i = 1; i < k && ok; ++i) {
            auto it = std::lower_bound(nbr_degs.begin(), nbr_degs.end(), i);
            std::size_t have = nbr_degs.end() - it;
            if (static_cast<double>(have) < need[i]) ok = false;
        }
        if (ok) out.push_back(v);
    }
    return out;
}

namespace detail {

// Smallest P with 2^(P-1) > d. Splitting a shattered set into P parts
// leaves every part with more superset-trace witnesses than d, so one
// witness per part sits right of it and the set is P-coverable. (The
// weaker 1+log d constant fails for d = 1 and at powers of two.)
inline std::uint32_t cover_spread_bound(std::uint32_t d) {
    std::uint32_t p = 1;
    while (!((p - 1) < 63 && (std::uint64_t(1) << (p - 1)) > d)) ++p;
    return p;
}

// Same computation as build_Q + is_shattered, with thread-local scratch
// instead of per-call tables; the search loops below call this per subset.
inline bool shattered_by_q(const OrderedGraph& og, const LeftSubsetCounter& r,
                           std::span<const VertexId> S) {
    if (!r.can_query(S.size()))
        throw CapacityError("R cap too small for |S| = " + std::to_string(S.size()));
    if (S.size() > LocalTable::kMaxUniverse) throw CapacityError("shattered check limited to 30");
    static thread_local std::vector<std::int64_t> vals;
    static thread_local std::vector<std::uint32_t> ranks;
    std::size_t full = std::size_t(1) << S.size();
    vals.assign(full, 0);

    ranks.clear();
    for (VertexId v : S) ranks.push_back(og.rank(v));
    for (std::size_t i = 1; i < ranks.size(); ++i)
        if (ranks[i - 1] >= ranks[i]) throw ContractViolation("set must be sorted by rank");
    const SubsetDictionary& dict = r.dict();
    auto rec = [&](auto&& self, std::uint32_t node, std::size_t from, std::uint32_t mask) -> void {
        vals[mask] = dict.value_at(node);
        for (std::size_t j = from; j < ranks.size(); ++j) {
            std::uint32_t child = dict.find_child(node, ranks[j]);
            if (child != SubsetDictionary::kNoNode) self(self, child, j + 1, mask | (1u << j));
        }
    };
    rec(rec, dict.root(), 0, 0);
    for (std::size_t i = 0; i < S.size(); ++i) {
        std::uint32_t bit = 1u << i;
        for (std::uint32_t mask = 0; mask < full; ++mask)
            if (!(mask & bit)) vals[mask] -= vals[mask | bit];
    }
    scan_left_boundary(og, S, [&](VertexId, std::uint32_t mask_left, std::uint32_t mask_full,
                                  std::uint32_t) {
        vals[mask_left] -= 1;
        vals[mask_full] += 1;
    });
    for (std::int64_t v : vals)
        if (v <= 0) return false;
    return true;
}

struct VcSearchState {
    const Graph* g;
    const OrderedGraph* og;
    LeftSubsetCounter* r;
    RunBudget* budget;
    std::vector<VertexId> cands;        // candidate_filter(best+1), sorted by id
    std::vector<bool> is_cand;
};

inline void refresh_candidates(VcSearchState& st, std::uint32_t k) {
    st.cands = candidate_filter(*st.g, k);
    st.is_cand.assign(st.g->num_vertices(), false);
    for (VertexId v : st.cands) st.is_cand[v] = true;
}

// Exhaustive scan of all k-subsets of the surviving candidates.
inline std::optional<std::vector<VertexId>> brute_force_arm(VcSearchState& st, std::uint32_t k) {
    std::optional<std::vector<VertexId>> hit;
    std::vector<VertexId> S;
    std::uint64_t steps = 0;
    detail::for_each_combination(st.cands.size(), k, [&](std::span<const std::uint32_t> comb) {
        if (((++steps) & 0x3ff) == 0) budget_check(st.budget);
        S.clear();
        for (std::uint32_t i : comb) S.push_back(st.cands[i]);
        std::sort(S.begin(), S.end(),
                  [&](VertexId a, VertexId b) { return st.og->rank(a) < st.og->rank(b); });
        if (shattered_by_q(*st.og, *st.r, S)) {
            hit = S;
            return false;
        }
        return true;
    });
    return hit;
}

// Cover arm at level c: scan k-subsets of candidate vertices inside the
// closed left-neighborhood of every |C| = c set.
inline std::optional<std::vector<VertexId>> cover_arm(VcSearchState& st, std::uint32_t k,
                                                      std::uint32_t c,
                                                      std::unordered_set<std::vector<VertexId>, VecHash>& tested) {
    std::size_t n = st.g->num_vertices();
    std::optional<std::vector<VertexId>> hit;
    std::vector<VertexId> C, S;
    std::unordered_set<std::vector<VertexId>, VecHash> seen_pools;
    detail::for_each_combination(n, c, [&](std::span<const std::uint32_t> comb) {
        budget_check(st.budget);
        C.assign(comb.begin(), comb.end());
        std::vector<VertexId> pool = closed_left_neighborhood(*st.og, C);
        pool.erase(std::remove_if(pool.begin(), pool.end(),
                                  [&](VertexId v) { return !st.is_cand[v]; }),
                   pool.end());
        if (pool.size() < k) return true;
        if (!seen_pools.insert(pool).second) return true;
        bool found = false;
        std::uint64_t steps = 0;
        detail::for_each_combination(pool.size(), k, [&](std::span<const std::uint32_t> si) {
            if (((++steps) & 0x1ff) == 0) budget_check(st.budget);
            S.clear();
            for (std::uint32_t i : si) S.push_back(pool[i]); // rank-sorted
            std::vector<VertexId> key = S;
            std::sort(key.begin(), key.end());
            if (!tested.insert(std::move(key)).second) return true;
            if (shattered_by_q(*st.og, *st.r, S)) {
                hit = S;
                found = true;
                return false;
            }
            return true;
        });
        return !found;
    });
    return hit;
}

// Exhausting cover level c rules out shattered k-sets when c >= k (the set
// covers itself) or when 2^(k - ceil(k/c)) > d: split S into c parts, each
// part's superset-trace witnesses outnumber d, so one of them sits right of
// the whole part and covers it.
inline bool level_certifies_absence(std::uint32_t c, std::uint32_t k, std::uint32_t d) {
    if (c >= k) return true;
    std::uint32_t e = k - (k + c - 1) / c;
    return e < 63 && (std::uint64_t(1) << e) > d;
}

// Decides whether some shattered set of size k exists. Follows the search
// schedule of the reference algorithm: cover levels c = 1, 2, ... against a
// cost-estimated switch to plain brute force over the surviving candidates.
// Either the brute-force arm runs to completion or some cover level that
// certifies absence is exhausted, so the answer is always definitive.
inline std::optional<std::vector<VertexId>> find_shattered_of_size(VcSearchState& st,
                                                                   std::uint32_t k) {
    std::size_t n = st.g->num_vertices();
    refresh_candidates(st, k);
    if (st.cands.size() < k) return std::nullopt;
    st.r->extend(k, st.budget);

    double bf_cost = binomial_estimate(static_cast<double>(st.cands.size()), k);
    std::uint32_t d = st.og->degeneracy();
    std::unordered_set<std::vector<VertexId>, VecHash> tested;

    for (std::uint32_t c = 1;; ++c) {
        double avg_pool = std::min<double>(static_cast<double>(c) * (d + 1),
                                           static_cast<double>(st.cands.size()));
        double cover_cost = binomial_estimate(static_cast<double>(n), c) *
                            binomial_estimate(avg_pool, k);
        if (bf_cost <= cover_cost) return brute_force_arm(st, k);
        auto hit = cover_arm(st, k, c, tested);
        if (hit) return hit;
        if (level_certifies_absence(c, k, d)) return std::nullopt;
    }
}

inline VcResult finalize_vc(const Graph& g, std::uint32_t best, VcMode mode, double eps,
                            const std::vector<VertexId>& found_set) {
    VcResult res;
    res.vc = best;
    res.mode = mode;
    res.epsilon = eps;
    res.shattered_set = found_set;
    std::sort(res.shattered_set.begin(), res.shattered_set.end());
    if (g.num_vertices() > 0) {
        auto wit = shattering_witnesses(g, res.shattered_set);
        if (!wit) throw std::logic_error("internal: reported set fails direct verification");
        res.witnesses = *wit;
    }
    return res;
}

} // namespace detail

// Exact VC-dimension of the neighborhood set system. The reported set is
// the lexicographically smallest maximum shattered set (final re-scan).
inline VcResult vc_exact(const Graph& g, RunBudget* budget = nullptr) {
    std::size_t n = g.num_vertices();
    if (n == 0) return VcResult{};
    OrderedGraph og = degeneracy_order(g);
    std::uint32_t d = og.degeneracy();
    LeftSubsetCounter r = build_R(og, 1, budget);

    detail::VcSearchState st{&g, &og, &r, budget, {}, {}};
    std::uint32_t best = 0;
    while (best + 1 <= d + 1) {
        auto hit = detail::find_shattered_of_size(st, best + 1);
        if (!hit) break;
        ++best;
    }

    // deterministic reporting pass
    std::vector<VertexId> report;
    if (best > 0) {
        std::vector<VertexId> cands = candidate_filter(g, best);
        std::vector<VertexId> S;
        detail::for_each_combination(cands.size(), best, [&](std::span<const std::uint32_t> comb) {
            budget_check(budget);
            S.clear();
            for (std::uint32_t i : comb) S.push_back(cands[i]);
            std::sort(S.begin(), S.end(),
                      [&](VertexId a, VertexId b) { return og.rank(a) < og.rank(b); });
            if (detail::shattered_by_q(og, r, S)) {
                report = S;
                return false;
            }
            return true;
        });
    }
    return detail::finalize_vc(g, best, VcMode::Exact, 1.0, report);
}

namespace detail {

inline VcResult vc_approx_core(const Graph& g, std::uint32_t c, VcMode mode, double eps,
                               RunBudget* budget) {
    std::size_t n = g.num_vertices();
    if (n == 0) return VcResult{.mode = mode, .epsilon = eps};
    OrderedGraph og = degeneracy_order(g);
    std::uint32_t d = og.degeneracy();
    c = std::max<std::uint32_t>(1, std::min<std::uint32_t>(c, static_cast<std::uint32_t>(n)));

    LeftSubsetCounter r = build_R(og, 1, budget);
    std::uint32_t best = 0;
    std::vector<VertexId> best_set;
    std::vector<VertexId> cands = candidate_filter(g, best + 1);
    std::vector<bool> is_cand(n, true);

    auto recompute = [&]() {
        cands = candidate_filter(g, best + 1);
        is_cand.assign(n, false);
        for (VertexId v : cands) is_cand[v] = true;
    };
    recompute();

    std::vector<VertexId> S, pool, filtered;
    auto fill_pool = [&](std::span<const VertexId> C) {
        pool.clear();
        for (VertexId c : C) {
            pool.push_back(c);
            const auto& ln = og.left_neighbors(c);
            pool.insert(pool.end(), ln.begin(), ln.end());
        }
        std::sort(pool.begin(), pool.end(),
                  [&](VertexId a, VertexId b) { return og.rank(a) < og.rank(b); });
        pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    };
    auto improve_with_pool = [&]() {
        while (best < d + 1) {
            std::uint32_t k = best + 1;
            filtered.clear();
            for (VertexId v : pool)
                if (is_cand[v]) filtered.push_back(v);
            if (filtered.size() < k) return;
            r.extend(k, budget);
            bool improved = false;
            std::uint64_t steps = 0;
            detail::for_each_combination(filtered.size(), k, [&](std::span<const std::uint32_t> comb) {
                if (((++steps) & 0x1ff) == 0) budget_check(budget);
                S.clear();
                for (std::uint32_t i : comb) S.push_back(filtered[i]); // rank-sorted
                if (shattered_by_q(og, r, S)) {
                    best = k;
                    best_set = S;
                    improved = true;
                    return false;
                }
                return true;
            });
            if (!improved) return;
            recompute();
        }
    };

    // cheap single-vertex seeding before the full c-subset sweep
    if (c > 1) {
        for (VertexId u = 0; u < n && best < d + 1; ++u) {
            budget_check(budget);
            VertexId cu = u;
            fill_pool(std::span<const VertexId>(&cu, 1));
            improve_with_pool();
        }
    }
    std::vector<VertexId> C;
    detail::for_each_combination(n, c, [&](std::span<const std::uint32_t> comb) {
        budget_check(budget);
        if (best >= d + 1) return false;
        C.assign(comb.begin(), comb.end());
        fill_pool(C);
        improve_with_pool();
        return true;
    });

    return finalize_vc(g, best, mode, eps, best_set);
}

} // namespace detail

// Factor-eps approximation: scans the closed left-neighborhood of every
// vertex set of size ceil(eps * P), where P is the cover spread bound.
inline VcResult vc_approx(const Graph& g, double eps, RunBudget* budget = nullptr) {
    if (!(eps > 0.0) || eps > 1.0) throw DomainError("epsilon must lie in (0, 1]");
    std::uint32_t d = g.num_vertices() ? degeneracy_order(g).degeneracy() : 0;
    std::uint32_t p = detail::cover_spread_bound(d);
    auto c = static_cast<std::uint32_t>(std::ceil(eps * p - 1e-9));
    c = std::max<std::uint32_t>(c, 1);
    return detail::vc_approx_core(g, c, VcMode::Approx, eps, budget);
}

// c = 1 special case: linear-time scan of single-vertex left-neighborhoods.
// Guaranteed within a factor 1/P of the optimum.
inline VcResult vc_approx_linear(const Graph& g, RunBudget* budget = nullptr) {
    std::uint32_t d = g.num_vertices() ? degeneracy_order(g).degeneracy() : 0;
    double factor = 1.0 / detail::cover_spread_bound(d);
    return detail::vc_approx_core(g, 1, VcMode::Linear, factor, budget);
}

struct ReductionResult {
    Graph graph;
    std::vector<std::string> labels;
};

// Clique-hardness instance generator: k vertex copies, an isolated vertex,
// pendants, one edge gadget per host edge and copy pair, and apex vertices
// for every index set of size >= 3. The output has a shattered set of size
// k exactly when the host has a k-clique.
inline ReductionResult clique_reduction(const Graph& h, std::uint32_t k) {
    if (k < 3 || k > 20) throw DomainError("clique reduction requires 3 <= k <= 20");
    std::size_t nh = h.num_vertices();
    ReductionResult out;
    std::vector<std::pair<VertexId, VertexId>> edges;

    auto copy_id = [&](std::uint32_t i, VertexId v) { return static_cast<VertexId>(i * nh + v); };
    for (std::uint32_t i = 0; i < k; ++i)
        for (VertexId v = 0; v < nh; ++v)
            out.labels.push_back("u" + std::to_string(v) + "_c" + std::to_string(i));

    VertexId w0 = static_cast<VertexId>(out.labels.size());
    out.labels.push_back("w0");

    for (std::uint32_t i = 0; i < k; ++i)
        for (VertexId v = 0; v < nh; ++v) {
            VertexId p = static_cast<VertexId>(out.labels.size());
            out.labels.push_back("p" + std::to_string(v) + "_c" + std::to_string(i));
            edges.emplace_back(p, copy_id(i, v));
        }

    for (VertexId u = 0; u < nh; ++u)
        for (VertexId v : h.neighbors(u)) {
            if (v <= u) continue; // canonical u < v
            for (std::uint32_t i = 0; i < k; ++i)
                for (std::uint32_t j = i + 1; j < k; ++j) {
                    VertexId w = static_cast<VertexId>(out.labels.size());
                    out.labels.push_back("e" + std::to_string(u) + "_" + std::to_string(v) +
                                         "_i" + std::to_string(i) + "_j" + std::to_string(j));
                    edges.emplace_back(w, copy_id(i, u));
                    edges.emplace_back(w, copy_id(j, v));
                }
        }

    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
        if (std::popcount(mask) < 3) continue;
        VertexId a = static_cast<VertexId>(out.labels.size());
        out.labels.push_back("a" + std::to_string(mask));
        for (std::uint32_t i = 0; i < k; ++i)
            if ((mask >> i) & 1u)
                for (VertexId v = 0; v < nh; ++v) edges.emplace_back(a, copy_id(i, v));
    }

    (void)w0;
    out.graph = Graph::from_edges(out.labels.size(), std::move(edges));
    return out;
}

} // namespace degpat
