#pragma once

#include <algorithm>
#include <cctype>
#include <istream>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "degpat/core.hpp"

namespace degpat {

// Simple undirected graph: dense vertex ids, no loops, no parallel edges.
// Adjacency is CSR-packed with each neighbor block sorted ascending.
class Graph {
public:
    Graph() : offsets_(1, 0) {}

    explicit Graph(std::size_t n) : offsets_(n + 1, 0) {}

    // Edges must reference vertices < n; duplicates and loops are dropped.
    static Graph from_edges(std::size_t n, std::vector<std::pair<VertexId, VertexId>> edges) {
        std::vector<std::pair<VertexId, VertexId>> clean;
        clean.reserve(edges.size());
        for (auto [a, b] : edges) {
            if (a >= n || b >= n) throw DomainError("edge endpoint out of range");
            if (a == b) continue;
            if (a > b) std::swap(a, b);
            clean.emplace_back(a, b);
        }
        std::sort(clean.begin(), clean.end());
        clean.erase(std::unique(clean.begin(), clean.end()), clean.end());

        Graph g(n);
        for (auto [a, b] : clean) {
            ++g.offsets_[a + 1];
            ++g.offsets_[b + 1];
        }
        for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] += g.offsets_[v];
        g.flat_.resize(2 * clean.size());
        std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
        for (auto [a, b] : clean) {
            g.flat_[cursor[a]++] = b;
            g.flat_[cursor[b]++] = a;
        }
        for (std::size_t v = 0; v < n; ++v)
            std::sort(g.flat_.begin() + g.offsets_[v], g.flat_.begin() + g.offsets_[v + 1]);
        g.m_ = clean.size();
        return g;
    }

    std::size_t num_vertices() const { return offsets_.size() - 1; }
    std::size_t num_edges() const { return m_; }

    std::span<const VertexId> neighbors(VertexId v) const {
        if (v + 1 >= offsets_.size()) throw DomainError("vertex id out of range");
        return {flat_.data() + offsets_[v], flat_.data() + offsets_[v + 1]};
    }
    std::size_t degree(VertexId v) const {
        if (v + 1 >= offsets_.size()) throw DomainError("vertex id out of range");
        return offsets_[v + 1] - offsets_[v];
    }

    bool has_edge(VertexId u, VertexId v) const {
        if (u + 1 >= offsets_.size() || v + 1 >= offsets_.size()) return false;
        if (degree(u) > degree(v)) std::swap(u, v);
        auto nb = neighbors(u);
        return std::binary_search(nb.begin(), nb.end(), v);
    }

private:
    std::vector<std::size_t> offsets_; // n+1 entries
    std::vector<VertexId> flat_;       // 2m entries, per-vertex sorted
    std::size_t m_ = 0;
};

struct LoadResult {
    Graph graph;
    std::vector<std::string> labels;           // dense id -> external token
    std::size_t dropped_duplicate_edges = 0;
    std::size_t dropped_self_loops = 0;

    VertexId id_of(const std::string& label) const {
        for (VertexId v = 0; v < labels.size(); ++v)
            if (labels[v] == label) return v;
        throw DomainError("unknown vertex label: " + label);
    }
};

// Edge-list reader. One edge per line, two tokens separated by whitespace
// or commas; lines starting with '#' or '%' are comments. Tokens are mapped
// to dense ids in first-appearance order.
inline LoadResult load_edge_list(std::istream& in) {
    LoadResult res;
    std::unordered_map<std::string, VertexId> ids;
    std::vector<std::pair<VertexId, VertexId>> edges;
    std::string line;
    std::size_t lineno = 0;

    auto intern = [&](const std::string& tok) -> VertexId {
        auto it = ids.find(tok);
        if (it != ids.end()) return it->second;
        VertexId v = static_cast<VertexId>(res.labels.size());
        ids.emplace(tok, v);
        res.labels.push_back(tok);
        return v;
    };

    while (std::getline(in, line)) {
        ++lineno;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        if (line[start] == '#' || line[start] == '%') continue;

        for (auto& c : line)
            if (c == ',' || c == '\t' || c == '\r') c = ' ';
        std::istringstream ss(line);
        std::string a, b, extra;
        if (!(ss >> a >> b)) throw ParseError(lineno, "expected two vertex tokens");
        if (ss >> extra) throw ParseError(lineno, "expected two vertex tokens, got more");

        VertexId u = intern(a);
        VertexId v = intern(b);
        if (u == v) {
            ++res.dropped_self_loops;
            continue;
        }
        edges.emplace_back(std::min(u, v), std::max(u, v));
    }

    if (res.labels.size() >= (std::size_t(1) << 32))
        throw CapacityError("vertex count exceeds 2^32");

    std::sort(edges.begin(), edges.end());
    std::size_t before = edges.size();
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    res.dropped_duplicate_edges = before - edges.size();
    res.graph = Graph::from_edges(res.labels.size(), std::move(edges));
    return res;
}

inline LoadResult load_edge_list(const std::string& text) {
    std::istringstream ss(text);
    return load_edge_list(ss);
}

// Graph plus a vertex order. left_neighbors(v) holds the neighbors that
// precede v, sorted ascending by rank; degeneracy is the max left-degree.
class OrderedGraph {
public:
    OrderedGraph(Graph g, std::vector<VertexId> order) : graph_(std::move(g)), order_(std::move(order)) {
        std::size_t n = graph_.num_vertices();
        if (order_.size() != n) throw DomainError("order must be a permutation of V");
        rank_.assign(n, 0);
        std::vector<bool> seen(n, false);
        for (std::uint32_t pos = 0; pos < n; ++pos) {
            VertexId v = order_[pos];
            if (v >= n || seen[v]) throw DomainError("order must be a permutation of V");
            seen[v] = true;
            rank_[v] = pos;
        }
        left_offsets_.assign(n + 1, 0);
        for (VertexId v = 0; v < n; ++v)
            for (VertexId u : graph_.neighbors(v))
                if (rank_[u] < rank_[v]) ++left_offsets_[v + 1];
        degeneracy_ = 0;
        for (VertexId v = 0; v < n; ++v) {
            degeneracy_ = std::max<std::uint32_t>(
                degeneracy_, static_cast<std::uint32_t>(left_offsets_[v + 1]));
            left_offsets_[v + 1] += left_offsets_[v];
        }
        left_flat_.resize(left_offsets_[n]);
        for (VertexId v = 0; v < n; ++v) {
            std::size_t at = left_offsets_[v];
            for (VertexId u : graph_.neighbors(v))
                if (rank_[u] < rank_[v]) left_flat_[at++] = u;
            std::sort(left_flat_.begin() + left_offsets_[v], left_flat_.begin() + at,
                      [&](VertexId a, VertexId b) { return rank_[a] < rank_[b]; });
        }
    }

    const Graph& graph() const { return graph_; }
    std::size_t num_vertices() const { return graph_.num_vertices(); }
    const std::vector<VertexId>& order() const { return order_; }
    std::uint32_t rank(VertexId v) const { return rank_.at(v); }
    std::span<const VertexId> left_neighbors(VertexId v) const {
        if (v + 1 >= left_offsets_.size()) throw DomainError("vertex id out of range");
        return {left_flat_.data() + left_offsets_[v], left_flat_.data() + left_offsets_[v + 1]};
    }
    std::uint32_t degeneracy() const { return degeneracy_; }

    bool rank_less(VertexId a, VertexId b) const { return rank_[a] < rank_[b]; }

private:
    Graph graph_;
    std::vector<VertexId> order_;        // position -> vertex
    std::vector<std::uint32_t> rank_;    // vertex -> position
    std::vector<std::size_t> left_offsets_;
    std::vector<VertexId> left_flat_;    // per-vertex blocks sorted by rank
    std::uint32_t degeneracy_ = 0;
};

// Smallest-last ordering: repeatedly remove a minimum-degree vertex
// (smallest id on ties) and place removed vertices right to left.
// The resulting max left-degree equals the degeneracy.
inline OrderedGraph degeneracy_order(const Graph& g) {
    std::size_t n = g.num_vertices();
    std::vector<std::uint32_t> deg(n);
    for (VertexId v = 0; v < n; ++v) deg[v] = static_cast<std::uint32_t>(g.degree(v));

    using Entry = std::pair<std::uint32_t, VertexId>; // (degree, id)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> pq;
    for (VertexId v = 0; v < n; ++v) pq.emplace(deg[v], v);

    std::vector<bool> removed(n, false);
    std::vector<VertexId> order(n);
    std::size_t next_pos = n;
    while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (removed[v] || d != deg[v]) continue; // stale entry
        removed[v] = true;
        order[--next_pos] = v;
        for (VertexId u : g.neighbors(v)) {
            if (!removed[u]) {
                --deg[u];
                pq.emplace(deg[u], u);
            }
        }
    }
    return OrderedGraph(g, std::move(order));
}

// N^-(C) united with C, sorted by rank. Size is at most |C|*(d+1).
inline std::vector<VertexId> closed_left_neighborhood(const OrderedGraph& og,
                                                      std::span<const VertexId> C) {
    std::vector<VertexId> out;
    for (VertexId c : C) {
        if (c >= og.num_vertices()) throw DomainError("vertex id out of range");
        out.push_back(c);
        const auto& ln = og.left_neighbors(c);
        out.insert(out.end(), ln.begin(), ln.end());
    }
    std::sort(out.begin(), out.end(), [&](VertexId a, VertexId b) { return og.rank(a) < og.rank(b); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace degpat
