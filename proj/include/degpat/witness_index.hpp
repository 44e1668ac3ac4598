#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "degpat/core.hpp"
#include "degpat/graph.hpp"
#include "degpat/subset_dict.hpp"

namespace degpat {

// R: for every rank-sorted X with |X| <= max_key_size, dict[X] counts the
// vertices whose left-neighborhood contains X. Built progressively; keys
// longer than the degeneracy are always zero, so caps are clamped there.
class LeftSubsetCounter {
public:
    static LeftSubsetCounter build(const OrderedGraph& og, std::uint32_t max_key_size,
                                   RunBudget* budget = nullptr) {
        LeftSubsetCounter r(og);
        r.cap_ = std::min(max_key_size, og.degeneracy() + 1);
        r.dict_.add({}, static_cast<std::int64_t>(og.num_vertices())); // size-0 key
        r.insert_range(1, r.cap_, budget);
        return r;
    }

    // Adds counts for key sizes in (old cap, new cap]. Requests at or below
    // the current cap are a no-op.
    void extend(std::uint32_t new_max, RunBudget* budget = nullptr) {
        new_max = std::min(new_max, og_->degeneracy() + 1);
        if (new_max <= cap_) return;
        std::uint32_t lo = cap_ + 1;
        cap_ = new_max;
        insert_range(lo, new_max, budget);
    }

    std::uint32_t max_key_size() const { return cap_; }

    // Keys longer than the degeneracy read as zero regardless of the cap.
    bool can_query(std::size_t key_size) const {
        return key_size <= cap_ || cap_ >= og_->degeneracy();
    }

    // R[X] for X given as vertex ids sorted by rank.
    std::int64_t count_with_left_superset(std::span<const VertexId> ids) const {
        std::vector<std::uint32_t> key = ranks_of(ids);
        return dict_.lookup(key);
    }

    const SubsetDictionary& dict() const { return dict_; }
    const OrderedGraph& source() const { return *og_; }

    std::vector<std::uint32_t> ranks_of(std::span<const VertexId> ids) const {
        std::vector<std::uint32_t> key;
        key.reserve(ids.size());
        for (VertexId v : ids) key.push_back(og_->rank(v));
        for (std::size_t i = 1; i < key.size(); ++i)
            if (key[i - 1] >= key[i]) throw ContractViolation("key must be sorted by rank");
        return key;
    }

private:
    explicit LeftSubsetCounter(const OrderedGraph& og) : og_(&og) {}

    // Inserts, for every vertex u, each subset of N^-(u) whose size lies in
    // [lo, hi]. The recursion walks the trie directly so sibling subsets
    // share their common prefix path.
    void insert_range(std::uint32_t lo, std::uint32_t hi, RunBudget* budget) {
        std::size_t n = og_->num_vertices();
        if (hi == 0 || lo > hi) return;
        std::vector<std::uint32_t> ranks;
        std::uint64_t steps = 0;
        for (VertexId u = 0; u < n; ++u) {
            budget_check(budget);
            const auto& left = og_->left_neighbors(u);
            if (left.empty()) continue;
            ranks.clear();
            for (VertexId w : left) ranks.push_back(og_->rank(w));
            descend(dict_.root(), ranks, 0, 1, lo, hi, budget, steps);
            if (budget && (u & 0xff) == 0) {
                budget->add_bytes(static_cast<std::int64_t>(dict_.approx_bytes()) - charged_);
                charged_ = static_cast<std::int64_t>(dict_.approx_bytes());
            }
        }
        if (budget) budget->add_bytes(static_cast<std::int64_t>(dict_.approx_bytes()) - charged_);
        charged_ = static_cast<std::int64_t>(dict_.approx_bytes());
    }

    void descend(std::uint32_t node, const std::vector<std::uint32_t>& ranks, std::size_t from,
                 std::uint32_t depth, std::uint32_t lo, std::uint32_t hi, RunBudget* budget,
                 std::uint64_t& steps) {
        for (std::size_t j = from; j < ranks.size(); ++j) {
            if (((++steps) & 0xffff) == 0) budget_check(budget);
            std::uint32_t child = dict_.child_or_insert(node, ranks[j]);
            if (depth >= lo) dict_.add_at(child, 1);
            if (depth < hi) descend(child, ranks, j + 1, depth + 1, lo, hi, budget, steps);
        }
    }

    const OrderedGraph* og_;
    SubsetDictionary dict_;
    std::uint32_t cap_ = 0;
    std::int64_t charged_ = 0;
};

inline LeftSubsetCounter build_R(const OrderedGraph& og, std::uint32_t max_key_size,
                                 RunBudget* budget = nullptr) {
    return LeftSubsetCounter::build(og, max_key_size, budget);
}

// Q_S: table[X] counts the vertices v whose neighborhood meets S in exactly
// X, for every X <= S.
struct ExactNeighborhoodTable {
    std::vector<VertexId> universe; // S, sorted by rank
    LocalTable table;

    std::int64_t at(std::uint32_t mask) const { return table.at(mask); }
};

inline std::int64_t q_lookup(const ExactNeighborhoodTable& q, std::uint32_t mask) {
    return q.at(mask);
}

namespace detail {

// Steps 1+2 of the Q_S construction: restrict R to submasks of S by a shared
// trie descent, then apply the signed superset-sum. The result counts exact
// left-intersections: out[X] = |{v : S cap N^-(v) = X}|.
inline LocalTable left_exact_table(const LeftSubsetCounter& r, std::span<const VertexId> S) {
    LocalTable t(std::vector<VertexId>(S.begin(), S.end()));
    std::vector<std::uint32_t> ranks = r.ranks_of(S);

    const SubsetDictionary& dict = r.dict();
    // Recursive restriction; missing trie branches mean all-zero entries.
    auto rec = [&](auto&& self, std::uint32_t node, std::size_t from, std::uint32_t mask) -> void {
        t[mask] = dict.value_at(node);
        for (std::size_t j = from; j < ranks.size(); ++j) {
            std::uint32_t child = dict.find_child(node, ranks[j]);
            if (child != SubsetDictionary::kNoNode) self(self, child, j + 1, mask | (1u << j));
        }
    };
    rec(rec, dict.root(), 0, 0);
    return mobius_invert_up(std::move(t));
}

// Visits each u in N^-(S) exactly once (epoch-stamped scratch) and reports
// its left and full intersection masks with S plus the number of S-vertices
// ranked before u.
template <typename F>
void scan_left_boundary(const OrderedGraph& og, std::span<const VertexId> S, F&& fn) {
    static thread_local std::vector<std::uint32_t> stamp;
    static thread_local std::uint32_t epoch = 0;
    if (stamp.size() < og.num_vertices()) stamp.assign(og.num_vertices(), 0);
    ++epoch;
    if (epoch == 0) { // wrapped
        std::fill(stamp.begin(), stamp.end(), 0);
        epoch = 1;
    }

    const Graph& g = og.graph();
    for (VertexId s : S) {
        for (VertexId u : og.left_neighbors(s)) {
            if (stamp[u] == epoch) continue;
            stamp[u] = epoch;
            std::uint32_t mask_full = 0, mask_left = 0, pos = 0;
            for (std::size_t j = 0; j < S.size(); ++j) {
                bool adj = g.has_edge(u, S[j]);
                bool left_of_u = og.rank(S[j]) < og.rank(u);
                if (adj) {
                    mask_full |= 1u << j;
                    if (left_of_u) mask_left |= 1u << j;
                }
                if (left_of_u) ++pos;
            }
            fn(u, mask_left, mask_full, pos);
        }
    }
}

} // namespace detail

// Theorem-2 style construction: Moebius inversion of R over S plus a
// correction pass over N^-(S). Requires the R cap to reach |S| and |S| <= 30.
inline ExactNeighborhoodTable build_Q(const OrderedGraph& og, const LeftSubsetCounter& r,
                                      std::span<const VertexId> S) {
    if (&r.source() != &og) throw ContractViolation("R was built for a different ordered graph");
    if (!r.can_query(S.size()))
        throw CapacityError("R cap " + std::to_string(r.max_key_size()) +
                            " too small for |S| = " + std::to_string(S.size()) +
                            "; extend the counter first");
    LocalTable t = detail::left_exact_table(r, S);
    detail::scan_left_boundary(og, S, [&](VertexId, std::uint32_t mask_left,
                                          std::uint32_t mask_full, std::uint32_t) {
        t[mask_left] -= 1;
        t[mask_full] += 1;
    });
    return ExactNeighborhoodTable{std::vector<VertexId>(S.begin(), S.end()), std::move(t)};
}

} // namespace degpat
