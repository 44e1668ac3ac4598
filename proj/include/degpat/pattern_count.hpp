#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "degpat/core.hpp"
#include "degpat/enumeration.hpp"
#include "degpat/graph.hpp"
#include "degpat/pattern.hpp"
#include "degpat/witness_index.hpp"

namespace degpat {

using BigInt = boost::multiprecision::cpp_int;

// Occurrence count in ordered-sides semantics: the number of pairs
// (image of side X as a vertex set, image of side Y as a vertex set)
// admitting a side-respecting embedding. A side-symmetric pattern is
// counted once per side assignment.
struct PatternCountResult {
    BigInt count = 0;
    double elapsed_ms = 0.0;
    std::uint64_t candidates_examined = 0;
};

namespace detail {

inline BigInt binomial(std::int64_t n, std::uint32_t k) {
    if (n < static_cast<std::int64_t>(k)) return 0;
    BigInt num = 1;
    for (std::uint32_t i = 0; i < k; ++i) num *= (n - i);
    for (std::uint32_t i = 2; i <= k; ++i) num /= i;
    return num;
}

// ---- two-sided plan (patterns with every cross pair black or red) ------
//
// A trace class is (mask, slot): mask is the exact neighborhood inside the
// candidate set, slot the number of candidate vertices ranked before the
// witness. Witnesses ranked after all their candidate neighbors fall into
// a single "top" slot; their exact position never affects left-covers.
// The multiset of classes determines the induced ordered pattern up to
// isomorphism, so the side its minimum cover lands on is a function of the
// multiset. That makes the X/Y split below count every ordered occurrence
// exactly once.

constexpr std::uint32_t kSlotTop = 0xffu;

inline std::uint64_t class_key(std::uint32_t mask, std::uint32_t slot) {
    return (static_cast<std::uint64_t>(slot) << 32) | mask;
}

using ClassMultiset = std::vector<std::pair<std::uint64_t, std::uint32_t>>; // sorted

struct TwoSidedPlan {
    std::uint32_t lc = 0;
    std::size_t size_x = 0, size_y = 0;
    std::vector<ClassMultiset> xsigs; // candidate plays side X
    std::vector<ClassMultiset> ysigs; // candidate plays side Y
    bool consistent = true;
};

inline ClassMultiset interleaved_signature(const Pattern& p, std::span<const std::uint32_t> order,
                                           bool candidate_is_x,
                                           const std::vector<std::uint32_t>& adj_masks) {
    std::size_t h = p.size();
    std::vector<std::uint32_t> rank(h);
    for (std::uint32_t i = 0; i < h; ++i) rank[order[i]] = i;

    // index of each candidate-side vertex within its own side order
    std::vector<std::uint32_t> side_vertices;
    for (std::uint32_t v : order)
        if (p.on_side_x(v) == candidate_is_x) side_vertices.push_back(v);
    std::vector<std::uint32_t> side_index(h, 0);
    for (std::uint32_t i = 0; i < side_vertices.size(); ++i) side_index[side_vertices[i]] = i;

    std::map<std::uint64_t, std::uint32_t> classes;
    for (std::uint32_t u : order) {
        if (p.on_side_x(u) == candidate_is_x) continue;
        std::uint32_t mask = 0;
        bool black_right = false;
        std::uint32_t slot = 0;
        for (std::uint32_t v : side_vertices) {
            bool adj = (adj_masks[u] >> v) & 1u;
            if (adj) mask |= 1u << side_index[v];
            if (rank[v] < rank[u]) ++slot;
            else if (adj) black_right = true;
        }
        classes[class_key(mask, black_right ? slot : kSlotTop)]++;
    }
    return ClassMultiset(classes.begin(), classes.end());
}

inline TwoSidedPlan build_two_sided_plan(const Pattern& p, std::uint32_t max_vertices) {
    if (p.size() > max_vertices)
        throw CapacityError("pattern has " + std::to_string(p.size()) +
                            " vertices; counting is limited to " + std::to_string(max_vertices));
    TwoSidedPlan plan;
    plan.size_x = p.size_x();
    plan.size_y = p.size_y();
    auto adj = p.black_adjacency_masks();

    std::set<ClassMultiset> xs_sideX, xs_sideY, ys_sideX, ys_sideY;
    std::map<std::vector<std::uint64_t>, CoverInfo> memo;

    std::vector<std::uint32_t> perm(p.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        auto key = ordered_structure_key(p, perm);
        auto it = memo.find(key);
        if (it == memo.end()) it = memo.emplace(key, cover_info(p, perm)).first;
        const CoverInfo& info = it->second;
        plan.lc = std::max(plan.lc, info.min_size);

        bool side_x = info.covers_x; // prefer X when both sides are min-coverable
        ClassMultiset mx = interleaved_signature(p, perm, true, adj);
        ClassMultiset my = interleaved_signature(p, perm, false, adj);
        (side_x ? xs_sideX : xs_sideY).insert(mx);
        (side_x ? ys_sideX : ys_sideY).insert(my);
    } while (std::next_permutation(perm.begin(), perm.end()));

    // The cover side must factor through either side's signature; if the two
    // partitions overlap the exact-once argument breaks and we fall back.
    for (const auto& m : xs_sideX)
        if (xs_sideY.count(m)) plan.consistent = false;
    for (const auto& m : ys_sideY)
        if (ys_sideX.count(m)) plan.consistent = false;

    plan.xsigs.assign(xs_sideX.begin(), xs_sideX.end());
    plan.ysigs.assign(ys_sideY.begin(), ys_sideY.end());
    return plan;
}

// Per-candidate class counts for the two-sided evaluation.
struct ClassCounts {
    std::vector<std::int64_t> top;                        // by mask
    std::unordered_map<std::uint64_t, std::int64_t> positioned; // by (mask, slot)

    std::int64_t available(std::uint64_t key) const {
        std::uint32_t slot = static_cast<std::uint32_t>(key >> 32);
        if (slot == kSlotTop) return top[static_cast<std::uint32_t>(key)];
        auto it = positioned.find(key);
        return it == positioned.end() ? 0 : it->second;
    }
};

inline ClassCounts class_counts(const OrderedGraph& og, const LeftSubsetCounter& r,
                                std::span<const VertexId> Z) {
    ClassCounts cc;
    LocalTable left_exact = left_exact_table(r, Z);
    cc.top.assign(left_exact.values().begin(), left_exact.values().end());
    scan_left_boundary(og, Z, [&](VertexId, std::uint32_t mask_left, std::uint32_t mask_full,
                                  std::uint32_t pos) {
        cc.top[mask_left] -= 1;
        cc.positioned[class_key(mask_full, pos)] += 1;
    });
    // members of Z cannot serve as witnesses
    const Graph& g = og.graph();
    for (std::uint32_t i = 0; i < Z.size(); ++i) {
        std::uint32_t mask = 0;
        bool has_right = false;
        for (std::uint32_t j = 0; j < Z.size(); ++j) {
            if (j != i && g.has_edge(Z[i], Z[j])) {
                mask |= 1u << j;
                if (j > i) has_right = true;
            }
        }
        if (has_right)
            cc.positioned[class_key(mask, i)] -= 1;
        else
            cc.top[mask] -= 1;
    }
    return cc;
}

inline BigInt eval_signatures(const ClassCounts& cc, const std::vector<ClassMultiset>& sigs) {
    BigInt total = 0;
    for (const auto& sig : sigs) {
        BigInt prod = 1;
        for (const auto& [key, mult] : sig) {
            prod *= binomial(cc.available(key), mult);
            if (prod == 0) break;
        }
        total += prod;
    }
    return total;
}

inline bool any_signature_satisfiable(const ClassCounts& cc, const std::vector<ClassMultiset>& sigs) {
    for (const auto& sig : sigs) {
        bool ok = true;
        for (const auto& [key, mult] : sig)
            if (cc.available(key) < static_cast<std::int64_t>(mult)) {
                ok = false;
                break;
            }
        if (ok) return true;
    }
    return false;
}

// ---- one-sided plan (patterns with white cross pairs) ------------------
//
// Candidates are images of one whole side (always reachable: the side
// left-covers itself), witnesses are matched against per-ordering
// admissibility profiles. Exact for every pattern; costs n^|side|.

struct WitnessProfile {
    // For each opposite-side pattern vertex: (required mask, allowed mask).
    // A witness trace m fits iff req <= m <= req|allow.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> slots;
    bool operator<(const WitnessProfile& o) const { return slots < o.slots; }
};

struct OneSidedPlan {
    bool candidate_is_x = true;
    std::size_t cand_size = 0, witness_count = 0;
    std::vector<WitnessProfile> profiles;
};

inline OneSidedPlan build_one_sided_plan(const Pattern& p, std::uint32_t max_vertices) {
    if (p.size() > max_vertices)
        throw CapacityError("pattern has " + std::to_string(p.size()) +
                            " vertices; counting is limited to " + std::to_string(max_vertices));
    OneSidedPlan plan;
    plan.candidate_is_x = p.size_x() <= p.size_y();
    plan.cand_size = plan.candidate_is_x ? p.size_x() : p.size_y();
    plan.witness_count = p.size() - plan.cand_size;

    std::vector<std::uint32_t> side, other;
    for (std::uint32_t v = 0; v < p.size(); ++v)
        (p.on_side_x(v) == plan.candidate_is_x ? side : other).push_back(v);

    std::set<WitnessProfile> dedup;
    std::sort(side.begin(), side.end());
    do {
        WitnessProfile prof;
        for (std::uint32_t u : other) {
            std::uint32_t req = 0, allow = 0;
            for (std::uint32_t i = 0; i < side.size(); ++i) {
                std::uint32_t xi = plan.candidate_is_x ? side[i] : u;
                std::uint32_t yi = plan.candidate_is_x ? u - static_cast<std::uint32_t>(p.size_x())
                                                       : side[i] - static_cast<std::uint32_t>(p.size_x());
                switch (p.color(xi, yi)) {
                    case EdgeColor::Black: req |= 1u << i; break;
                    case EdgeColor::White: allow |= 1u << i; break;
                    case EdgeColor::Red: break;
                }
            }
            prof.slots.emplace_back(req, allow);
        }
        std::sort(prof.slots.begin(), prof.slots.end());
        dedup.insert(std::move(prof));
    } while (std::next_permutation(side.begin(), side.end()));
    plan.profiles.assign(dedup.begin(), dedup.end());
    return plan;
}

inline bool slot_admits(const std::pair<std::uint32_t, std::uint32_t>& slot, std::uint32_t mask) {
    return (mask & slot.first) == slot.first && (mask & ~(slot.first | slot.second)) == 0;
}

// Perfect matching of profile slots into class tokens (classes expanded up
// to the number of slots). Kuhn's algorithm; everything here is tiny.
inline bool profile_matches(const WitnessProfile& prof,
                            const std::vector<std::pair<std::uint32_t, std::uint32_t>>& classes) {
    std::size_t nslots = prof.slots.size();
    std::vector<std::uint32_t> token_mask;
    for (auto [mask, cnt] : classes)
        for (std::uint32_t i = 0; i < std::min<std::uint32_t>(cnt, static_cast<std::uint32_t>(nslots)); ++i)
            token_mask.push_back(mask);

    std::vector<int> token_owner(token_mask.size(), -1);
    std::vector<bool> visited;
    auto try_slot = [&](auto&& self, std::size_t s) -> bool {
        for (std::size_t t = 0; t < token_mask.size(); ++t) {
            if (visited[t] || !slot_admits(prof.slots[s], token_mask[t])) continue;
            visited[t] = true;
            if (token_owner[t] < 0 || self(self, static_cast<std::size_t>(token_owner[t]))) {
                token_owner[t] = static_cast<int>(s);
                return true;
            }
        }
        return false;
    };
    for (std::size_t s = 0; s < nslots; ++s) {
        visited.assign(token_mask.size(), false);
        if (!try_slot(try_slot, s)) return false;
    }
    return true;
}

inline bool multiset_valid(const OneSidedPlan& plan,
                           const std::vector<std::pair<std::uint32_t, std::uint32_t>>& classes) {
    for (const auto& prof : plan.profiles)
        if (profile_matches(prof, classes)) return true;
    return false;
}

// Sum over all witness multisets drawn from the availability vector that
// admit an embedding, of the number of ways to realize them.
inline BigInt one_sided_candidate_count(const OneSidedPlan& plan,
                                        const std::vector<std::pair<std::uint32_t, std::int64_t>>& avail,
                                        bool decide_only, bool& found) {
    BigInt total = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> chosen; // (mask, count)
    std::size_t w = plan.witness_count;

    auto rec = [&](auto&& self, std::size_t idx, std::size_t left, BigInt ways) -> void {
        if (decide_only && found) return;
        if (left == 0) {
            if (multiset_valid(plan, chosen)) {
                total += ways;
                found = true;
            }
            return;
        }
        if (idx == avail.size()) return;
        std::size_t rest = 0;
        for (std::size_t j = idx; j < avail.size(); ++j)
            rest += static_cast<std::size_t>(std::min<std::int64_t>(avail[j].second, left));
        if (rest < left) return;
        std::uint32_t maxc = static_cast<std::uint32_t>(std::min<std::int64_t>(avail[idx].second, left));
        for (std::uint32_t c = 0; c <= maxc; ++c) {
            BigInt w2 = ways;
            if (c > 0) {
                w2 *= binomial(avail[idx].second, c);
                chosen.emplace_back(avail[idx].first, c);
            }
            self(self, idx + 1, left - c, w2);
            if (c > 0) chosen.pop_back();
            if (decide_only && found) return;
        }
    };
    rec(rec, 0, w, BigInt(1));
    return total;
}

} // namespace detail

// General counting pipeline: analyze the pattern, build R, enumerate cover
// candidates C and side-sized subsets Z of their closed left-neighborhoods,
// evaluate each distinct Z once.
inline PatternCountResult count_pattern_impl(const Graph& g, const Pattern& p, bool decide_only,
                                             bool& exists, RunBudget* budget,
                                             std::uint32_t max_vertices = 10) {
    auto t0 = std::chrono::steady_clock::now();
    PatternCountResult res;
    exists = false;
    if (p.size_x() < 2 || p.size_y() < 2)
        throw DomainError("patterns with a side of size 1 are not supported here; "
                          "use count_bicliques or plain edge counting");

    std::size_t n = g.num_vertices();
    auto finish = [&]() {
        res.elapsed_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        return res;
    };
    if (n < p.size()) return finish();

    bool one_sided = p.has_white_cross();
    detail::TwoSidedPlan plan2;
    detail::OneSidedPlan plan1;
    if (!one_sided) {
        plan2 = detail::build_two_sided_plan(p, max_vertices);
        if (!plan2.consistent) one_sided = true;
    }
    if (one_sided) plan1 = detail::build_one_sided_plan(p, max_vertices);

    OrderedGraph og = degeneracy_order(g);
    std::uint32_t cap =
        one_sided ? static_cast<std::uint32_t>(plan1.cand_size)
                  : static_cast<std::uint32_t>(std::max(plan2.size_x, plan2.size_y));
    LeftSubsetCounter r = build_R(og, cap, budget);

    if (one_sided) {
        // Every candidate-side image left-covers itself, so iterate all
        // |side|-subsets directly instead of going through cover sets.
        std::vector<VertexId> Z;
        bool stop = false;
        detail::for_each_combination(n, plan1.cand_size, [&](std::span<const std::uint32_t> comb) {
            budget_check(budget);
            Z.assign(comb.begin(), comb.end());
            std::sort(Z.begin(), Z.end(), [&](VertexId a, VertexId b) { return og.rank(a) < og.rank(b); });
            ++res.candidates_examined;

            ExactNeighborhoodTable q = build_Q(og, r, Z);
            std::vector<std::int64_t> adjust(q.table.size(), 0);
            const Graph& gg = og.graph();
            for (std::size_t i = 0; i < Z.size(); ++i) {
                std::uint32_t mask = 0;
                for (std::size_t j = 0; j < Z.size(); ++j)
                    if (j != i && gg.has_edge(Z[i], Z[j])) mask |= 1u << j;
                adjust[mask] += 1;
            }
            std::vector<std::pair<std::uint32_t, std::int64_t>> avail;
            for (std::uint32_t m = 0; m < q.table.size(); ++m) {
                std::int64_t a = q.at(m) - adjust[m];
                if (a <= 0) continue;
                bool usable = false;
                for (const auto& prof : plan1.profiles) {
                    for (const auto& slot : prof.slots)
                        if (detail::slot_admits(slot, m)) {
                            usable = true;
                            break;
                        }
                    if (usable) break;
                }
                if (usable) avail.emplace_back(m, a);
            }
            bool found = false;
            res.count += detail::one_sided_candidate_count(plan1, avail, decide_only, found);
            if (found) exists = true;
            if (decide_only && exists) {
                stop = true;
                return false;
            }
            return true;
        });
        (void)stop;
        if (!decide_only) exists = res.count > 0;
        return finish();
    }

    std::size_t csize = std::min<std::size_t>(plan2.lc, n);
    std::vector<std::size_t> zsizes;
    zsizes.push_back(plan2.size_x);
    if (plan2.size_y != plan2.size_x) zsizes.push_back(plan2.size_y);

    std::unordered_set<std::vector<VertexId>, detail::VecHash> seen;
    std::vector<VertexId> C, Z, zkey;
    std::uint64_t steps = 0;

    bool stop = false;
    detail::for_each_combination(n, csize, [&](std::span<const std::uint32_t> comb) {
        budget_check(budget);
        C.assign(comb.begin(), comb.end());
        std::vector<VertexId> pool = closed_left_neighborhood(og, C);
        for (std::size_t s : zsizes) {
            if (pool.size() < s) continue;
            detail::for_each_combination(pool.size(), s, [&](std::span<const std::uint32_t> zi) {
                if (((++steps) & 0xff) == 0) budget_check(budget);
                Z.clear();
                for (std::uint32_t i : zi) Z.push_back(pool[i]); // rank-sorted
                zkey = Z;
                std::sort(zkey.begin(), zkey.end());
                if (!seen.insert(zkey).second) return true;
                ++res.candidates_examined;
                if (budget) budget->add_bytes(static_cast<std::int64_t>(sizeof(VertexId) * zkey.size() + 32));

                detail::ClassCounts cc = detail::class_counts(og, r, Z);
                if (decide_only) {
                    if ((s == plan2.size_x && detail::any_signature_satisfiable(cc, plan2.xsigs)) ||
                        (s == plan2.size_y && detail::any_signature_satisfiable(cc, plan2.ysigs)))
                        exists = true;
                } else {
                    BigInt val = 0;
                    if (s == plan2.size_x) val += detail::eval_signatures(cc, plan2.xsigs);
                    if (s == plan2.size_y) val += detail::eval_signatures(cc, plan2.ysigs);
                    res.count += val;
                }
                if (decide_only && exists) {
                    stop = true;
                    return false;
                }
                return true;
            });
            if (stop) break;
        }
        return !stop;
    });

    if (!decide_only) exists = res.count > 0;
    return finish();
}

inline PatternCountResult count_pattern(const Graph& g, const Pattern& p,
                                        RunBudget* budget = nullptr) {
    bool exists = false;
    return count_pattern_impl(g, p, false, exists, budget);
}

inline bool decide_pattern(const Graph& g, const Pattern& p, RunBudget* budget = nullptr) {
    bool exists = false;
    count_pattern_impl(g, p, true, exists, budget);
    return exists;
}

// Biclique specialization: lc = 1, single-vertex candidates, and the class
// structure collapses to common-neighbor counts. For a candidate Z of size
// s the witness sets are the t-subsets of the common neighborhood that
// contain at least one vertex ranked above all of Z; those over-the-top
// witnesses are counted by R[Z] directly.
inline PatternCountResult count_bicliques(const Graph& g, std::uint32_t s, std::uint32_t t,
                                          RunBudget* budget = nullptr) {
    if (s < t || t < 1) throw DomainError("count_bicliques requires s >= t >= 1");
    auto t0 = std::chrono::steady_clock::now();
    PatternCountResult res;
    auto finish = [&]() {
        res.elapsed_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        return res;
    };

    std::size_t n = g.num_vertices();
    if (t == 1) {
        if (s == 1) {
            res.count = BigInt(2) * static_cast<std::int64_t>(g.num_edges());
        } else {
            for (VertexId v = 0; v < n; ++v)
                res.count += detail::binomial(static_cast<std::int64_t>(g.degree(v)), s);
        }
        return finish();
    }

    OrderedGraph og = degeneracy_order(g);
    LeftSubsetCounter r = build_R(og, s, budget);

    std::vector<std::size_t> zsizes{s};
    if (t != s) zsizes.push_back(t);

    std::unordered_set<std::vector<VertexId>, detail::VecHash> seen;
    std::vector<VertexId> Z, zkey, common, tmp;
    std::uint64_t steps = 0;

    for (VertexId u = 0; u < n; ++u) {
        budget_check(budget);
        VertexId cu = u;
        std::vector<VertexId> pool = closed_left_neighborhood(og, std::span<const VertexId>(&cu, 1));
        for (std::size_t zs : zsizes) {
            if (pool.size() < zs) continue;
            detail::for_each_combination(pool.size(), zs, [&](std::span<const std::uint32_t> zi) {
                if (((++steps) & 0x1ff) == 0) budget_check(budget);
                Z.clear();
                for (std::uint32_t i : zi) Z.push_back(pool[i]);
                zkey = Z;
                std::sort(zkey.begin(), zkey.end());
                if (!seen.insert(zkey).second) return true;
                ++res.candidates_examined;
                if (budget) budget->add_bytes(static_cast<std::int64_t>(sizeof(VertexId) * zkey.size() + 32));

                // common neighborhood by sorted-list intersection
                common.assign(g.neighbors(zkey[0]).begin(), g.neighbors(zkey[0]).end());
                for (std::size_t i = 1; i < zkey.size() && !common.empty(); ++i) {
                    tmp.clear();
                    std::set_intersection(common.begin(), common.end(),
                                          g.neighbors(zkey[i]).begin(), g.neighbors(zkey[i]).end(),
                                          std::back_inserter(tmp));
                    common.swap(tmp);
                }
                std::int64_t cn = static_cast<std::int64_t>(common.size());
                std::int64_t over_top = r.count_with_left_superset(Z);
                std::uint32_t other = (zs == s) ? t : s;
                BigInt val = detail::binomial(cn, other) - detail::binomial(cn - over_top, other);
                if (zs == s && s == t) val *= 2; // both side assignments
                res.count += val;
                return true;
            });
        }
    }
    return finish();
}

// Co-matchings go through the general pipeline; analyze recovers lc = 2 and
// the single signature class. Sizes are limited by the factorial guard.
inline PatternCountResult count_comatchings(const Graph& g, std::uint32_t t,
                                            RunBudget* budget = nullptr) {
    if (t < 2) throw DomainError("count_comatchings requires t >= 2");
    return count_pattern(g, make_comatching(t), budget);
}

} // namespace degpat
