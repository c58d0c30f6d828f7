#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace drdom {

using Vertex = int;
using VertexSet = std::vector<Vertex>;  // always sorted, no duplicates
using Edge = std::pair<Vertex, Vertex>;

/// Simple undirected graph on vertices 0..n-1 with sorted adjacency lists.
/// Immutable once built; use GraphBuilder or Graph::from_edges.
class Graph {
   public:
    Graph() = default;

    /// Edgeless graph on n vertices.
    explicit Graph(std::size_t n) : adj_(n) {}

    static Graph from_edges(std::size_t n, std::span<const Edge> edges);

    std::size_t order() const noexcept { return adj_.size(); }
    std::size_t size() const noexcept { return m_; }

    std::span<const Vertex> neighbors(Vertex v) const { return adj_[static_cast<std::size_t>(v)]; }
    std::size_t degree(Vertex v) const { return adj_[static_cast<std::size_t>(v)].size(); }

    bool adjacent(Vertex u, Vertex v) const {
        const auto& a = adj_[static_cast<std::size_t>(u)];
        return std::binary_search(a.begin(), a.end(), v);
    }

    /// Edges (u,v) with u < v in lexicographic order.
    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        out.reserve(m_);
        for (std::size_t u = 0; u < adj_.size(); ++u)
            for (Vertex v : adj_[u])
                if (static_cast<Vertex>(u) < v) out.emplace_back(static_cast<Vertex>(u), v);
        return out;
    }

    friend bool operator==(const Graph& a, const Graph& b) { return a.adj_ == b.adj_; }

   private:
    friend class GraphBuilder;
    std::vector<std::vector<Vertex>> adj_;
    std::size_t m_ = 0;
};

/// Accumulates edges and produces a Graph. Duplicate edges throw from build()
/// when `strict`, and are merged otherwise.
class GraphBuilder {
   public:
    explicit GraphBuilder(std::size_t n, bool strict = true) : adj_(n), strict_(strict) {}

    std::size_t order() const noexcept { return adj_.size(); }

    void add_edge(Vertex u, Vertex v) {
        const auto n = static_cast<Vertex>(adj_.size());
        if (u < 0 || v < 0 || u >= n || v >= n) throw std::out_of_range("vertex id out of range");
        if (u == v) throw std::invalid_argument("self-loop on vertex " + std::to_string(u));
        adj_[static_cast<std::size_t>(u)].push_back(v);
        adj_[static_cast<std::size_t>(v)].push_back(u);
    }

    Graph build() && {
        Graph g;
        g.adj_ = std::move(adj_);
        std::size_t twice = 0;
        for (auto& list : g.adj_) {
            std::sort(list.begin(), list.end());
            auto dup = std::adjacent_find(list.begin(), list.end());
            if (dup != list.end()) {
                if (strict_) throw std::invalid_argument("duplicate edge");
                list.erase(std::unique(list.begin(), list.end()), list.end());
            }
            twice += list.size();
        }
        g.m_ = twice / 2;
        return g;
    }

   private:
    std::vector<std::vector<Vertex>> adj_;
    bool strict_;
};

inline Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
    GraphBuilder b(n);
    for (auto [u, v] : edges) b.add_edge(u, v);
    return std::move(b).build();
}

/// A (d,r)-Domination instance. `budget`, when set, turns it into the decision question.
struct DominationInstance {
    Graph graph;
    int d = 1;
    int r = 1;
    std::optional<int> budget;

    void validate() const {
        if (d < 1) throw PreconditionError("demand d must be >= 1");
        if (r < 1) throw PreconditionError("radius r must be >= 1");
        if (budget && (*budget < 0 || static_cast<std::size_t>(*budget) > graph.order()))
            throw PreconditionError("budget must lie in [0, n]");
    }
};

struct Solution {
    VertexSet vertices;
    std::string method;
    bool valid = false;

    std::size_t size() const noexcept { return vertices.size(); }
};

// ---------------------------------------------------------------------------
// Edge-list I/O

/// Reads the edge-list format: '#' comment lines, a header "n m", then m lines "u v".
inline Graph parse_edge_list(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') continue;
            return true;
        }
        return false;
    };
    auto read_pair = [&](long long& a, long long& b) {
        std::istringstream ss(line);
        std::string extra;
        if (!(ss >> a >> b) || (ss >> extra)) return false;
        return true;
    };

    if (!next_line()) throw ParseError(lineno + 1, "missing header \"n m\"");
    long long n = 0, m = 0;
    if (!read_pair(n, m) || n < 0 || m < 0) throw ParseError(lineno, "malformed header, expected \"n m\"");
    if (n > std::numeric_limits<Vertex>::max()) throw ParseError(lineno, "vertex count too large");

    struct Entry {
        Vertex lo, hi;
        std::size_t line;
    };
    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(std::min<long long>(m, 1LL << 26)));
    for (long long i = 0; i < m; ++i) {
        if (!next_line()) throw ParseError(lineno + 1, "expected " + std::to_string(m) + " edges, found " + std::to_string(i));
        long long u = 0, v = 0;
        if (!read_pair(u, v)) throw ParseError(lineno, "malformed edge line");
        if (u < 0 || v < 0 || u >= n || v >= n) throw ParseError(lineno, "vertex id out of range");
        if (u == v) throw ParseError(lineno, "self-loop on vertex " + std::to_string(u));
        entries.push_back({static_cast<Vertex>(std::min(u, v)), static_cast<Vertex>(std::max(u, v)), lineno});
    }
    if (next_line()) throw ParseError(lineno, "more edge lines than the header declares");

    // Report the earliest line that repeats an already-seen pair.
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return std::tie(a.lo, a.hi, a.line) < std::tie(b.lo, b.hi, b.line);
    });
    std::optional<std::size_t> dup_line;
    Edge dup{};
    for (std::size_t i = 1; i < entries.size(); ++i)
        if (entries[i].lo == entries[i - 1].lo && entries[i].hi == entries[i - 1].hi &&
            (!dup_line || entries[i].line < *dup_line)) {
            dup_line = entries[i].line;
            dup = {entries[i].lo, entries[i].hi};
        }
    if (dup_line)
        throw ParseError(*dup_line, "duplicate edge " + std::to_string(dup.first) + "-" + std::to_string(dup.second));

    GraphBuilder b(static_cast<std::size_t>(n));
    for (const auto& e : entries) b.add_edge(e.lo, e.hi);
    return std::move(b).build();
}

inline Graph parse_edge_list(const std::string& text) {
    std::istringstream in(text);
    return parse_edge_list(in);
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
    out << g.order() << ' ' << g.size() << '\n';
    for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

inline std::string to_edge_list(const Graph& g) {
    std::ostringstream out;
    write_edge_list(out, g);
    return out.str();
}

// ---------------------------------------------------------------------------
// Distances and powers

inline constexpr int kUnreachable = -1;

/// BFS distances from `source`, stopping after `limit` layers (kUnreachable beyond).
inline std::vector<int> bfs_distances(const Graph& g, Vertex source, int limit = std::numeric_limits<int>::max()) {
    std::vector<int> dist(g.order(), kUnreachable);
    std::vector<Vertex> frontier{source};
    dist[static_cast<std::size_t>(source)] = 0;
    for (std::size_t head = 0; head < frontier.size(); ++head) {
        Vertex u = frontier[head];
        int du = dist[static_cast<std::size_t>(u)];
        if (du >= limit) continue;
        for (Vertex w : g.neighbors(u)) {
            if (dist[static_cast<std::size_t>(w)] == kUnreachable) {
                dist[static_cast<std::size_t>(w)] = du + 1;
                frontier.push_back(w);
            }
        }
    }
    return dist;
}

/// N_r(v): vertices at distance 1..r from v, sorted.
inline VertexSet ball(const Graph& g, Vertex v, int r) {
    auto dist = bfs_distances(g, v, r);
    VertexSet out;
    for (std::size_t u = 0; u < dist.size(); ++u)
        if (dist[u] >= 1) out.push_back(static_cast<Vertex>(u));
    return out;
}

/// G^r: same vertex set, u~v iff 1 <= dist_G(u,v) <= r.
inline Graph graph_power(const Graph& g, int r) {
    if (r < 1) throw PreconditionError("graph_power needs r >= 1");
    if (r == 1) return g;
    GraphBuilder b(g.order());
    for (std::size_t u = 0; u < g.order(); ++u) {
        auto dist = bfs_distances(g, static_cast<Vertex>(u), r);
        for (std::size_t v = u + 1; v < g.order(); ++v)
            if (dist[v] >= 1) b.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v));
    }
    return std::move(b).build();
}

inline std::vector<VertexSet> connected_components(const Graph& g) {
    std::vector<int> comp(g.order(), -1);
    std::vector<VertexSet> out;
    for (std::size_t s = 0; s < g.order(); ++s) {
        if (comp[s] != -1) continue;
        int id = static_cast<int>(out.size());
        VertexSet members{static_cast<Vertex>(s)};
        comp[s] = id;
        for (std::size_t head = 0; head < members.size(); ++head)
            for (Vertex w : g.neighbors(members[head]))
                if (comp[static_cast<std::size_t>(w)] == -1) {
                    comp[static_cast<std::size_t>(w)] = id;
                    members.push_back(w);
                }
        std::sort(members.begin(), members.end());
        out.push_back(std::move(members));
    }
    return out;
}

inline bool is_connected(const Graph& g) { return g.order() <= 1 || connected_components(g).size() == 1; }

/// Subgraph induced by `keep` (sorted); vertex i of the result is keep[i].
inline Graph induced_subgraph(const Graph& g, std::span<const Vertex> keep) {
    std::vector<int> local(g.order(), -1);
    for (std::size_t i = 0; i < keep.size(); ++i) local[static_cast<std::size_t>(keep[i])] = static_cast<int>(i);
    GraphBuilder b(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (Vertex w : g.neighbors(keep[i])) {
            int j = local[static_cast<std::size_t>(w)];
            if (j > static_cast<int>(i)) b.add_edge(static_cast<Vertex>(i), j);
        }
    return std::move(b).build();
}

// ---------------------------------------------------------------------------
// Domination predicates

/// True iff every v outside `s` has at least d members of `s` within distance r.
/// Runs one depth-r BFS per member of `s`.
inline bool is_dr_dominating(const Graph& g, int d, int r, std::span<const Vertex> s) {
    const std::size_t n = g.order();
    std::vector<char> in_s(n, 0);
    for (Vertex v : s) in_s[static_cast<std::size_t>(v)] = 1;
    std::vector<int> hits(n, 0);
    if (r == 1) {
        for (Vertex v : s)
            for (Vertex w : g.neighbors(v)) ++hits[static_cast<std::size_t>(w)];
    } else {
        std::vector<int> seen(n, -1);
        std::vector<std::pair<Vertex, int>> queue;
        for (std::size_t k = 0; k < s.size(); ++k) {
            queue.assign(1, {s[k], 0});
            seen[static_cast<std::size_t>(s[k])] = static_cast<int>(k);
            for (std::size_t head = 0; head < queue.size(); ++head) {
                auto [u, du] = queue[head];
                if (du == r) continue;
                for (Vertex w : g.neighbors(u)) {
                    if (seen[static_cast<std::size_t>(w)] == static_cast<int>(k)) continue;
                    seen[static_cast<std::size_t>(w)] = static_cast<int>(k);
                    ++hits[static_cast<std::size_t>(w)];
                    queue.emplace_back(w, du + 1);
                }
            }
        }
    }
    for (std::size_t v = 0; v < n; ++v)
        if (!in_s[v] && hits[v] < d) return false;
    return true;
}

/// Vertices with fewer than d vertices within distance r; they belong to every solution.
inline VertexSet forced_vertices(const Graph& g, int d, int r) {
    VertexSet out;
    for (std::size_t v = 0; v < g.order(); ++v)
        if (ball(g, static_cast<Vertex>(v), r).size() < static_cast<std::size_t>(d)) out.push_back(static_cast<Vertex>(v));
    return out;
}

}  // namespace drdom
