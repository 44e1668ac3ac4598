#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "degpat/core.hpp"

namespace degpat {

// Prefix trie mapping canonically ordered integer-set keys to counts.
// Keys must be strictly increasing; absent keys read as 0. Interior
// children are sorted sparse (key, node) vectors, so descending along a
// sorted neighborhood touches O(|X|) nodes. The root can have one child
// per vertex rank and dispatches through a dense array instead; keys are
// expected to be dense (ranks), so the array stays proportional to n.
class SubsetDictionary {
public:
    using Key = std::uint32_t;

    SubsetDictionary() { nodes_.emplace_back(); }

    void add(std::span<const Key> key, std::int64_t delta) {
        check_sorted(key);
        std::uint32_t node = 0;
        for (Key k : key) node = child_or_create(node, k);
        nodes_[node].value += delta;
    }

    std::int64_t lookup(std::span<const Key> key) const {
        check_sorted(key);
        std::uint32_t node = 0;
        for (Key k : key) {
            auto next = find_child(node, k);
            if (next == kNoNode) return 0;
            node = next;
        }
        return nodes_[node].value;
    }

    // Descent primitives used by the R builder and the Q-table restriction
    // pass; node handles stay valid across inserts.
    static constexpr std::uint32_t kNoNode = 0xffffffffu;
    std::uint32_t root() const { return 0; }
    std::uint32_t child_or_insert(std::uint32_t node, Key k) { return child_or_create(node, k); }
    void add_at(std::uint32_t node, std::int64_t delta) { nodes_[node].value += delta; }
    std::uint32_t find_child(std::uint32_t node, Key k) const {
        if (node == 0) return k < root_kids_.size() ? root_kids_[k] : kNoNode;
        const auto& ch = nodes_[node].children;
        auto it = std::lower_bound(ch.begin(), ch.end(), k,
                                   [](const auto& a, Key b) { return a.first < b; });
        if (it == ch.end() || it->first != k) return kNoNode;
        return it->second;
    }
    std::int64_t value_at(std::uint32_t node) const { return nodes_[node].value; }

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t approx_bytes() const {
        std::size_t b = nodes_.size() * sizeof(Node) + root_kids_.capacity() * sizeof(std::uint32_t);
        for (const auto& nd : nodes_) b += nd.children.capacity() * sizeof(std::pair<Key, std::uint32_t>);
        return b;
    }

    // Visits every stored (key, value) pair with value != 0, keys in
    // lexicographic order.
    void for_each(const std::function<void(std::span<const Key>, std::int64_t)>& fn) const {
        std::vector<Key> prefix;
        if (nodes_[0].value != 0) fn(prefix, nodes_[0].value);
        for (Key k = 0; k < root_kids_.size(); ++k) {
            if (root_kids_[k] == kNoNode) continue;
            prefix.push_back(k);
            walk(root_kids_[k], prefix, fn);
            prefix.pop_back();
        }
    }

    friend bool operator==(const SubsetDictionary& a, const SubsetDictionary& b) {
        std::vector<std::pair<std::vector<Key>, std::int64_t>> ea, eb;
        a.for_each([&](std::span<const Key> k, std::int64_t v) { ea.emplace_back(std::vector<Key>(k.begin(), k.end()), v); });
        b.for_each([&](std::span<const Key> k, std::int64_t v) { eb.emplace_back(std::vector<Key>(k.begin(), k.end()), v); });
        return ea == eb;
    }

private:
    struct Node {
        std::vector<std::pair<Key, std::uint32_t>> children; // sorted by key
        std::int64_t value = 0;
    };

    static void check_sorted(std::span<const Key> key) {
        for (std::size_t i = 1; i < key.size(); ++i)
            if (key[i - 1] >= key[i])
                throw ContractViolation("subset dictionary key must be strictly increasing");
    }

    std::uint32_t child_or_create(std::uint32_t node, Key k) {
        if (node == 0) {
            if (k >= root_kids_.size()) root_kids_.resize(k + 1, kNoNode);
            if (root_kids_[k] != kNoNode) return root_kids_[k];
            std::uint32_t fresh = static_cast<std::uint32_t>(nodes_.size());
            nodes_.emplace_back();
            root_kids_[k] = fresh;
            return fresh;
        }
        auto& ch = nodes_[node].children;
        auto it = std::lower_bound(ch.begin(), ch.end(), k,
                                   [](const auto& a, Key b) { return a.first < b; });
        if (it != ch.end() && it->first == k) return it->second;
        std::uint32_t fresh = static_cast<std::uint32_t>(nodes_.size());
        std::size_t idx = it - ch.begin();
        nodes_.emplace_back();
        nodes_[node].children.insert(nodes_[node].children.begin() + idx, {k, fresh});
        return fresh;
    }

    void walk(std::uint32_t node, std::vector<Key>& prefix,
              const std::function<void(std::span<const Key>, std::int64_t)>& fn) const {
        if (nodes_[node].value != 0) fn(prefix, nodes_[node].value);
        for (const auto& [k, c] : nodes_[node].children) {
            prefix.push_back(k);
            walk(c, prefix, fn);
            prefix.pop_back();
        }
    }

    std::vector<Node> nodes_;
    std::vector<std::uint32_t> root_kids_; // root child per key, kNoNode when absent
};

// Dense 2^|S| table over a small ordered universe. Bit i of an index
// corresponds to universe[i].
class LocalTable {
public:
    static constexpr std::size_t kMaxUniverse = 30;

    LocalTable() : values_(1, 0) {}

    explicit LocalTable(std::vector<VertexId> universe) : universe_(std::move(universe)) {
        if (universe_.size() > kMaxUniverse)
            throw CapacityError("local table universe exceeds " + std::to_string(kMaxUniverse) +
                                " elements");
        values_.assign(std::size_t(1) << universe_.size(), 0);
    }

    const std::vector<VertexId>& universe() const { return universe_; }
    std::size_t universe_size() const { return universe_.size(); }
    std::size_t size() const { return values_.size(); }

    std::int64_t& operator[](std::uint32_t mask) { return values_[mask]; }
    std::int64_t operator[](std::uint32_t mask) const { return values_[mask]; }

    std::int64_t at(std::uint32_t mask) const {
        if (mask >= values_.size()) throw ContractViolation("mask has bits outside the universe");
        return values_[mask];
    }

    const std::vector<std::int64_t>& values() const { return values_; }
    std::vector<std::int64_t>& values() { return values_; }

private:
    std::vector<VertexId> universe_;
    std::vector<std::int64_t> values_;
};

// Signed superset-sum transform: out[X] = sum over Y >= X of (-1)^|Y\X| in[Y].
// Word-parallel Yates sweep, |S| * 2^|S| updates.
inline LocalTable mobius_invert_up(LocalTable t) {
    auto& a = t.values();
    std::size_t k = t.universe_size();
    for (std::size_t i = 0; i < k; ++i) {
        std::uint32_t bit = 1u << i;
        for (std::uint32_t mask = 0; mask < a.size(); ++mask)
            if (!(mask & bit)) a[mask] -= a[mask | bit];
    }
    return t;
}

// Inverse of mobius_invert_up: out[X] = sum over Y >= X of in[Y].
inline LocalTable zeta_superset(LocalTable t) {
    auto& a = t.values();
    std::size_t k = t.universe_size();
    for (std::size_t i = 0; i < k; ++i) {
        std::uint32_t bit = 1u << i;
        for (std::uint32_t mask = 0; mask < a.size(); ++mask)
            if (!(mask & bit)) a[mask] += a[mask | bit];
    }
    return t;
}

} // namespace degpat
