#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "degpat/core.hpp"
#include "degpat/graph.hpp"

namespace degpat {

enum class EdgeColor { White, Black, Red };

// Bipartite pattern: complete graph on X u Y with cross pairs colored
// black (must be an edge), red (must be a non-edge) or white (free).
// Pairs inside a side are always white.
class Pattern {
public:
    static Pattern bipartite(std::vector<std::string> x_labels, std::vector<std::string> y_labels,
                             std::vector<std::pair<std::uint32_t, std::uint32_t>> black,
                             std::vector<std::pair<std::uint32_t, std::uint32_t>> red) {
        if (x_labels.empty() || y_labels.empty())
            throw DomainError("pattern sides must be non-empty");
        Pattern p;
        p.x_labels_ = std::move(x_labels);
        p.y_labels_ = std::move(y_labels);
        auto validate = [&](auto& pairs) {
            for (auto [xi, yi] : pairs)
                if (xi >= p.x_labels_.size() || yi >= p.y_labels_.size())
                    throw DomainError("pattern edge index out of range");
            std::sort(pairs.begin(), pairs.end());
            pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
        };
        validate(black);
        validate(red);
        for (const auto& e : black)
            if (std::binary_search(red.begin(), red.end(), e))
                throw DomainError("pattern pair colored both black and red");
        p.black_ = std::move(black);
        p.red_ = std::move(red);
        return p;
    }

    std::size_t size_x() const { return x_labels_.size(); }
    std::size_t size_y() const { return y_labels_.size(); }
    std::size_t size() const { return x_labels_.size() + y_labels_.size(); }

    // Vertex indices: 0..|X|-1 is side X, then side Y.
    bool on_side_x(std::uint32_t v) const { return v < x_labels_.size(); }
    const std::string& label(std::uint32_t v) const {
        return on_side_x(v) ? x_labels_[v] : y_labels_[v - x_labels_.size()];
    }
    const std::vector<std::string>& x_labels() const { return x_labels_; }
    const std::vector<std::string>& y_labels() const { return y_labels_; }

    EdgeColor color(std::uint32_t xi, std::uint32_t yi) const {
        std::pair<std::uint32_t, std::uint32_t> e{xi, yi};
        if (std::binary_search(black_.begin(), black_.end(), e)) return EdgeColor::Black;
        if (std::binary_search(red_.begin(), red_.end(), e)) return EdgeColor::Red;
        return EdgeColor::White;
    }

    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& black_pairs() const { return black_; }
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& red_pairs() const { return red_; }

    bool has_white_cross() const {
        return black_.size() + red_.size() < size_x() * size_y();
    }

    // Per-vertex black adjacency as masks over the 0..|H|-1 vertex indexing.
    std::vector<std::uint32_t> black_adjacency_masks() const {
        if (size() > 32) throw CapacityError("pattern too large for mask representation");
        std::vector<std::uint32_t> m(size(), 0);
        for (auto [xi, yi] : black_) {
            std::uint32_t a = xi, b = static_cast<std::uint32_t>(x_labels_.size() + yi);
            m[a] |= 1u << b;
            m[b] |= 1u << a;
        }
        return m;
    }

    // Realization with black pairs as edges and everything else absent.
    Graph to_graph() const {
        std::vector<std::pair<VertexId, VertexId>> edges;
        edges.reserve(black_.size());
        for (auto [xi, yi] : black_)
            edges.emplace_back(xi, static_cast<VertexId>(x_labels_.size() + yi));
        return Graph::from_edges(size(), std::move(edges));
    }

private:
    Pattern() = default;
    std::vector<std::string> x_labels_, y_labels_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> black_, red_; // (x idx, y idx), sorted
};

inline Pattern make_biclique(std::uint32_t s, std::uint32_t t) {
    if (s == 0 || t == 0) throw DomainError("biclique sides must be positive");
    std::vector<std::string> xs, ys;
    for (std::uint32_t i = 1; i <= s; ++i) xs.push_back("x" + std::to_string(i));
    for (std::uint32_t i = 1; i <= t; ++i) ys.push_back("y" + std::to_string(i));
    std::vector<std::pair<std::uint32_t, std::uint32_t>> black;
    for (std::uint32_t i = 0; i < s; ++i)
        for (std::uint32_t j = 0; j < t; ++j) black.emplace_back(i, j);
    return Pattern::bipartite(std::move(xs), std::move(ys), std::move(black), {});
}

// Crown: all cross pairs black except the matched pairs, which are red.
inline Pattern make_comatching(std::uint32_t t) {
    if (t == 0) throw DomainError("co-matching size must be positive");
    std::vector<std::string> xs, ys;
    for (std::uint32_t i = 1; i <= t; ++i) xs.push_back("a" + std::to_string(i));
    for (std::uint32_t i = 1; i <= t; ++i) ys.push_back("b" + std::to_string(i));
    std::vector<std::pair<std::uint32_t, std::uint32_t>> black, red;
    for (std::uint32_t i = 0; i < t; ++i)
        for (std::uint32_t j = 0; j < t; ++j)
            (i == j ? red : black).emplace_back(i, j);
    return Pattern::bipartite(std::move(xs), std::move(ys), std::move(black), std::move(red));
}

// Chain graph: a_i b_j black iff i > j (1-based), red otherwise.
inline Pattern make_ladder(std::uint32_t t) {
    if (t == 0) throw DomainError("ladder size must be positive");
    std::vector<std::string> xs, ys;
    for (std::uint32_t i = 1; i <= t; ++i) xs.push_back("a" + std::to_string(i));
    for (std::uint32_t i = 1; i <= t; ++i) ys.push_back("b" + std::to_string(i));
    std::vector<std::pair<std::uint32_t, std::uint32_t>> black, red;
    for (std::uint32_t i = 0; i < t; ++i)
        for (std::uint32_t j = 0; j < t; ++j)
            (i > j ? black : red).emplace_back(i, j);
    return Pattern::bipartite(std::move(xs), std::move(ys), std::move(black), std::move(red));
}

// Same black staircase as the ladder, but only the matched pairs are red;
// the pairs above the diagonal stay white.
inline Pattern make_semiladder(std::uint32_t t) {
    if (t == 0) throw DomainError("semi-ladder size must be positive");
    std::vector<std::string> xs, ys;
    for (std::uint32_t i = 1; i <= t; ++i) xs.push_back("a" + std::to_string(i));
    for (std::uint32_t i = 1; i <= t; ++i) ys.push_back("b" + std::to_string(i));
    std::vector<std::pair<std::uint32_t, std::uint32_t>> black, red;
    for (std::uint32_t i = 0; i < t; ++i)
        for (std::uint32_t j = 0; j < t; ++j) {
            if (i > j) black.emplace_back(i, j);
            else if (i == j) red.emplace_back(i, j);
        }
    return Pattern::bipartite(std::move(xs), std::move(ys), std::move(black), std::move(red));
}

// Shattered pattern U_t: side X is the shattered set s_1..s_t, side Y one
// witness w_I per subset I, black into I and red into the rest.
inline Pattern make_shattered(std::uint32_t t) {
    if (t == 0) throw DomainError("shattered pattern size must be positive");
    if (t > 20) throw CapacityError("shattered pattern limited to t <= 20");
    std::vector<std::string> xs, ys;
    for (std::uint32_t i = 1; i <= t; ++i) xs.push_back("s" + std::to_string(i));
    std::uint32_t nw = 1u << t;
    for (std::uint32_t mask = 0; mask < nw; ++mask) ys.push_back("w" + std::to_string(mask));
    std::vector<std::pair<std::uint32_t, std::uint32_t>> black, red;
    for (std::uint32_t mask = 0; mask < nw; ++mask)
        for (std::uint32_t i = 0; i < t; ++i)
            ((mask >> i) & 1u ? black : red).emplace_back(i, mask);
    return Pattern::bipartite(std::move(xs), std::move(ys), std::move(black), std::move(red));
}

struct OrderedPattern {
    const Pattern* pattern;
    std::vector<std::uint32_t> order; // position -> pattern vertex index
};

// Multiset of index sets, canonically sorted ascending by mask value.
using Signature = std::vector<std::uint32_t>;

// Signature of the side fixed by Z_order: for every vertex of the opposite
// side, the index set of its black neighborhood under that order.
inline Signature signature_of(const Pattern& p, std::span<const std::uint32_t> Z_order) {
    if (Z_order.empty()) throw DomainError("empty side ordering");
    bool x_side = p.on_side_x(Z_order[0]);
    std::size_t want = x_side ? p.size_x() : p.size_y();
    if (Z_order.size() != want) throw DomainError("ordering must cover exactly one side");
    std::vector<std::uint32_t> pos(p.size(), 0xffffffffu);
    for (std::uint32_t i = 0; i < Z_order.size(); ++i) {
        std::uint32_t v = Z_order[i];
        if (p.on_side_x(v) != x_side || pos[v] != 0xffffffffu)
            throw DomainError("ordering must be a permutation of one side");
        pos[v] = i;
    }
    auto masks = p.black_adjacency_masks();
    Signature sig;
    for (std::uint32_t v = 0; v < p.size(); ++v) {
        if (p.on_side_x(v) == x_side) continue;
        std::uint32_t idxset = 0;
        for (std::uint32_t u = 0; u < p.size(); ++u)
            if ((masks[v] >> u) & 1u) idxset |= 1u << pos[u];
        sig.push_back(idxset);
    }
    std::sort(sig.begin(), sig.end());
    return sig;
}

namespace detail {

struct CoverInfo {
    std::uint32_t min_size = 0;
    bool covers_x = false; // some minimum-size cover covers side X
    bool covers_y = false;
};

// Minimum left-cover of an ordered pattern: smallest C whose closed left
// black-neighborhood contains a full side. Subset sweep over 2^|H| masks.
inline CoverInfo cover_info(const Pattern& p, std::span<const std::uint32_t> order) {
    std::size_t h = p.size();
    if (h > 20) throw CapacityError("left-cover search limited to 20 pattern vertices");
    std::vector<std::uint32_t> rank(h);
    for (std::uint32_t i = 0; i < h; ++i) rank[order[i]] = i;
    auto masks = p.black_adjacency_masks();

    // closed[v] = v plus its black neighbors that precede v in the order
    std::vector<std::uint32_t> closed(h);
    for (std::uint32_t v = 0; v < h; ++v) {
        std::uint32_t m = 1u << v;
        for (std::uint32_t u = 0; u < h; ++u)
            if (((masks[v] >> u) & 1u) && rank[u] < rank[v]) m |= 1u << u;
        closed[v] = m;
    }

    std::uint32_t xmask = (1u << p.size_x()) - 1u;
    std::uint32_t ymask = ((1u << h) - 1u) ^ xmask;

    std::size_t full = std::size_t(1) << h;
    std::vector<std::uint32_t> covered(full, 0);
    std::uint32_t best_x = static_cast<std::uint32_t>(h) + 1, best_y = best_x;
    for (std::size_t c = 1; c < full; ++c) {
        std::uint32_t low = static_cast<std::uint32_t>(c & (~c + 1));
        std::uint32_t v = static_cast<std::uint32_t>(std::countr_zero(low));
        covered[c] = covered[c ^ low] | closed[v];
        std::uint32_t sz = static_cast<std::uint32_t>(std::popcount(c));
        if ((covered[c] & xmask) == xmask) best_x = std::min(best_x, sz);
        if ((covered[c] & ymask) == ymask) best_y = std::min(best_y, sz);
    }
    CoverInfo info;
    info.min_size = std::min(best_x, best_y);
    info.covers_x = best_x == info.min_size;
    info.covers_y = best_y == info.min_size;
    return info;
}

// Canonical descriptor of an ordered pattern: per position, its side bit and
// the set of earlier positions it is black-adjacent to. Two orderings with
// the same key are isomorphic as ordered patterns.
inline std::vector<std::uint64_t> ordered_structure_key(const Pattern& p,
                                                        std::span<const std::uint32_t> order) {
    auto masks = p.black_adjacency_masks();
    std::size_t h = p.size();
    std::vector<std::uint32_t> rank(h);
    for (std::uint32_t i = 0; i < h; ++i) rank[order[i]] = i;
    std::vector<std::uint64_t> key(h);
    for (std::uint32_t i = 0; i < h; ++i) {
        std::uint32_t v = order[i];
        std::uint32_t back = 0;
        for (std::uint32_t u = 0; u < h; ++u)
            if (((masks[v] >> u) & 1u) && rank[u] < i) back |= 1u << rank[u];
        key[i] = (std::uint64_t(p.on_side_x(v) ? 1 : 0) << 32) | back;
    }
    return key;
}

} // namespace detail

// Minimum left-cover size of one concrete ordering.
inline std::uint32_t left_cover_number(const OrderedPattern& op) {
    return detail::cover_info(*op.pattern, op.order).min_size;
}

struct PatternAnalysis {
    std::uint32_t lc = 0;                 // max over orderings of the min cover size
    std::set<Signature> sigs_x;           // signatures from orderings whose min cover covers X
    std::set<Signature> sigs_y;
    std::uint32_t hoa_x = 0, hoa_y = 0;   // distinct signatures over all side orderings
    std::uint32_t hoa = 0;
};

// Brute force over all |H|! orderings; cover searches are memoized on the
// ordered-structure key. max_vertices guards the factorial blowup.
inline PatternAnalysis analyze(const Pattern& p, std::uint32_t max_vertices = 10,
                               bool memoize = true) {
    if (p.size() > max_vertices)
        throw CapacityError("pattern has " + std::to_string(p.size()) +
                            " vertices; analyze is limited to " + std::to_string(max_vertices));
    PatternAnalysis out;

    std::vector<std::uint32_t> perm(p.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::map<std::vector<std::uint64_t>, detail::CoverInfo> memo;
    do {
        detail::CoverInfo info;
        if (memoize) {
            auto key = detail::ordered_structure_key(p, perm);
            auto it = memo.find(key);
            if (it == memo.end())
                it = memo.emplace(key, detail::cover_info(p, perm)).first;
            info = it->second;
        } else {
            info = detail::cover_info(p, perm);
        }
        out.lc = std::max(out.lc, info.min_size);
        if (info.covers_x || info.covers_y) {
            std::vector<std::uint32_t> xo, yo;
            for (std::uint32_t v : perm) (p.on_side_x(v) ? xo : yo).push_back(v);
            if (info.covers_x) out.sigs_x.insert(signature_of(p, xo));
            if (info.covers_y) out.sigs_y.insert(signature_of(p, yo));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    auto count_side = [&](bool x_side) {
        std::vector<std::uint32_t> side;
        for (std::uint32_t v = 0; v < p.size(); ++v)
            if (p.on_side_x(v) == x_side) side.push_back(v);
        std::set<Signature> seen;
        std::sort(side.begin(), side.end());
        do {
            seen.insert(signature_of(p, side));
        } while (std::next_permutation(side.begin(), side.end()));
        return static_cast<std::uint32_t>(seen.size());
    };
    out.hoa_x = count_side(true);
    out.hoa_y = count_side(false);
    out.hoa = std::max(out.hoa_x, out.hoa_y);
    return out;
}

// ---- pattern file format ----------------------------------------------
//
// {"sideX": [labels], "sideY": [labels], "black": [[u,v],...], "red": [...]}
// Unlisted cross pairs are white. Pairs may list the two endpoints in
// either order but must connect the two sides.

inline Pattern pattern_from_json(const nlohmann::json& j) {
    if (!j.contains("sideX") || !j.contains("sideY"))
        throw DomainError("pattern file needs sideX and sideY");
    std::vector<std::string> xs = j.at("sideX").get<std::vector<std::string>>();
    std::vector<std::string> ys = j.at("sideY").get<std::vector<std::string>>();
    std::map<std::string, std::pair<bool, std::uint32_t>> where;
    for (std::uint32_t i = 0; i < xs.size(); ++i) {
        if (!where.emplace(xs[i], std::make_pair(true, i)).second)
            throw DomainError("duplicate pattern label: " + xs[i]);
    }
    for (std::uint32_t i = 0; i < ys.size(); ++i) {
        if (!where.emplace(ys[i], std::make_pair(false, i)).second)
            throw DomainError("duplicate pattern label: " + ys[i]);
    }
    auto read_pairs = [&](const char* field) {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
        if (!j.contains(field)) return out;
        for (const auto& e : j.at(field)) {
            if (!e.is_array() || e.size() != 2)
                throw DomainError(std::string(field) + " entries must be label pairs");
            auto a = where.find(e[0].get<std::string>());
            auto b = where.find(e[1].get<std::string>());
            if (a == where.end() || b == where.end())
                throw DomainError("pattern edge references unknown label");
            if (a->second.first == b->second.first)
                throw DomainError("pattern edge must connect the two sides");
            auto [xi, yi] = a->second.first ? std::make_pair(a->second.second, b->second.second)
                                            : std::make_pair(b->second.second, a->second.second);
            out.emplace_back(xi, yi);
        }
        return out;
    };
    return Pattern::bipartite(std::move(xs), std::move(ys), read_pairs("black"), read_pairs("red"));
}

inline nlohmann::json pattern_to_json(const Pattern& p) {
    nlohmann::json j;
    j["sideX"] = p.x_labels();
    j["sideY"] = p.y_labels();
    auto dump = [&](const auto& pairs) {
        nlohmann::json arr = nlohmann::json::array();
        for (auto [xi, yi] : pairs) arr.push_back({p.x_labels()[xi], p.y_labels()[yi]});
        return arr;
    };
    j["black"] = dump(p.black_pairs());
    j["red"] = dump(p.red_pairs());
    return j;
}

// Builtin pattern specs: biclique:s,t  comatching:t  ladder:t
// semiladder:t  shattered:t
inline Pattern parse_builtin_pattern(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw DomainError("builtin pattern spec needs name:args");
    std::string name = spec.substr(0, colon);
    std::string args = spec.substr(colon + 1);
    auto to_u32 = [](const std::string& s) {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
            throw DomainError("bad integer in pattern spec: '" + s + "'");
        return static_cast<std::uint32_t>(std::stoul(s));
    };
    if (name == "biclique") {
        auto comma = args.find(',');
        if (comma == std::string::npos) throw DomainError("biclique spec needs s,t");
        return make_biclique(to_u32(args.substr(0, comma)), to_u32(args.substr(comma + 1)));
    }
    if (name == "comatching") return make_comatching(to_u32(args));
    if (name == "ladder") return make_ladder(to_u32(args));
    if (name == "semiladder") return make_semiladder(to_u32(args));
    if (name == "shattered") return make_shattered(to_u32(args));
    throw DomainError("unknown builtin pattern: " + name);
}

} // namespace degpat
