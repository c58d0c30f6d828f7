#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "graph.hpp"

namespace drdom {

enum class NodeKind { Leaf, Union, Join, Prime };

inline const char* to_string(NodeKind k) {
    switch (k) {
        case NodeKind::Leaf: return "leaf";
        case NodeKind::Union: return "union";
        case NodeKind::Join: return "join";
        case NodeKind::Prime: return "prime";
    }
    return "?";
}

struct ParseNode {
    NodeKind kind = NodeKind::Leaf;
    Vertex vertex = -1;         // Leaf only
    std::vector<int> children;  // node indices
    Graph quotient;             // Prime only; vertex i <-> children[i]
    std::size_t first = 0;      // range into ParseTree::leaf_order()
    std::size_t count = 0;      // module size
};

/// Modular-decomposition parse tree. Nodes live in a flat vector; the module of
/// a node is a contiguous range of the DFS leaf order.
class ParseTree {
   public:
    int add_leaf(Vertex v) {
        ParseNode node;
        node.vertex = v;
        nodes_.push_back(std::move(node));
        return static_cast<int>(nodes_.size() - 1);
    }

    int add_internal(NodeKind kind, std::vector<int> children, Graph quotient = {}) {
        ParseNode node;
        node.kind = kind;
        node.children = std::move(children);
        node.quotient = std::move(quotient);
        nodes_.push_back(std::move(node));
        return static_cast<int>(nodes_.size() - 1);
    }

    /// Sets the root and computes leaf order, module ranges and post-order.
    void finalize(int root) {
        root_ = root;
        leaf_order_.clear();
        post_order_.clear();
        // iterative DFS; children visited in stored order
        std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
        nodes_[static_cast<std::size_t>(root)].first = 0;
        while (!stack.empty()) {
            auto& [id, next] = stack.back();
            ParseNode& node = nodes_[static_cast<std::size_t>(id)];
            if (next == 0) node.first = leaf_order_.size();
            if (node.kind == NodeKind::Leaf) leaf_order_.push_back(node.vertex);
            if (next < node.children.size()) {
                int child = node.children[next++];
                stack.emplace_back(child, 0);
                continue;
            }
            node.count = leaf_order_.size() - node.first;
            post_order_.push_back(id);
            stack.pop_back();
        }
    }

    int root() const noexcept { return root_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    const ParseNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
    const std::vector<ParseNode>& nodes() const noexcept { return nodes_; }
    const std::vector<Vertex>& leaf_order() const noexcept { return leaf_order_; }
    /// Children always precede their parent.
    const std::vector<int>& post_order() const noexcept { return post_order_; }

    std::span<const Vertex> module_span(int id) const {
        const auto& n = node(id);
        return std::span<const Vertex>(leaf_order_).subspan(n.first, n.count);
    }

    VertexSet module(int id) const {
        auto span = module_span(id);
        VertexSet out(span.begin(), span.end());
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Largest Prime arity, or 2 when the tree has no Prime node.
    std::size_t width() const {
        std::size_t w = 2;
        for (const auto& n : nodes_)
            if (n.kind == NodeKind::Prime) w = std::max(w, n.children.size());
        return w;
    }

   private:
    std::vector<ParseNode> nodes_;
    std::vector<Vertex> leaf_order_;
    std::vector<int> post_order_;
    int root_ = -1;
};

namespace detail {

/// Connected components of the complement, in O(n + m).
inline std::vector<VertexSet> complement_components(const Graph& g) {
    const std::size_t n = g.order();
    std::vector<Vertex> unvisited(n);
    std::iota(unvisited.begin(), unvisited.end(), 0);
    std::vector<std::size_t> mark(n, 0);
    std::size_t stamp = 0;
    std::vector<VertexSet> out;
    while (!unvisited.empty()) {
        VertexSet comp{unvisited.front()};
        unvisited.erase(unvisited.begin());
        for (std::size_t head = 0; head < comp.size(); ++head) {
            ++stamp;
            for (Vertex w : g.neighbors(comp[head])) mark[static_cast<std::size_t>(w)] = stamp;
            std::vector<Vertex> rest;
            rest.reserve(unvisited.size());
            for (Vertex w : unvisited) {
                if (mark[static_cast<std::size_t>(w)] == stamp)
                    rest.push_back(w);
                else
                    comp.push_back(w);
            }
            unvisited.swap(rest);
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Maximal modules of g not containing `pivot`, by partition refinement.
inline std::vector<VertexSet> maximal_modules_avoiding(const Graph& g, Vertex pivot) {
    const std::size_t n = g.order();
    struct Part {
        std::size_t start, end, marked;
    };
    std::vector<Vertex> elems;
    elems.reserve(n);
    std::vector<std::size_t> pos(n, 0);
    std::vector<int> part_of(n, -1);
    std::vector<Part> parts;

    std::vector<char> near(n, 0);
    for (Vertex w : g.neighbors(pivot)) near[static_cast<std::size_t>(w)] = 1;
    for (int side = 1; side >= 0; --side) {
        std::size_t start = elems.size();
        for (std::size_t v = 0; v < n; ++v)
            if (static_cast<Vertex>(v) != pivot && near[v] == side) elems.push_back(static_cast<Vertex>(v));
        if (elems.size() > start) {
            for (std::size_t i = start; i < elems.size(); ++i) {
                pos[static_cast<std::size_t>(elems[i])] = i;
                part_of[static_cast<std::size_t>(elems[i])] = static_cast<int>(parts.size());
            }
            parts.push_back({start, elems.size(), 0});
        }
    }

    std::vector<Vertex> queue(elems);
    std::vector<char> queued(n, 0);
    for (Vertex v : queue) queued[static_cast<std::size_t>(v)] = 1;
    std::vector<int> touched;
    auto enqueue_part = [&](const Part& p) {
        for (std::size_t i = p.start; i < p.end; ++i) {
            Vertex v = elems[i];
            if (!queued[static_cast<std::size_t>(v)]) {
                queued[static_cast<std::size_t>(v)] = 1;
                queue.push_back(v);
            }
        }
    };

    for (std::size_t head = 0; head < queue.size(); ++head) {
        Vertex x = queue[head];
        queued[static_cast<std::size_t>(x)] = 0;
        const int own = part_of[static_cast<std::size_t>(x)];
        touched.clear();
        for (Vertex y : g.neighbors(x)) {
            const int p = part_of[static_cast<std::size_t>(y)];
            if (p < 0 || p == own) continue;
            Part& P = parts[static_cast<std::size_t>(p)];
            std::size_t target = P.start + P.marked;
            Vertex other = elems[target];
            std::swap(elems[pos[static_cast<std::size_t>(y)]], elems[target]);
            pos[static_cast<std::size_t>(other)] = pos[static_cast<std::size_t>(y)];
            pos[static_cast<std::size_t>(y)] = target;
            if (P.marked++ == 0) touched.push_back(p);
        }
        for (int p : touched) {
            Part& P = parts[static_cast<std::size_t>(p)];
            if (P.marked == P.end - P.start) {
                P.marked = 0;
                continue;
            }
            Part fresh{P.start, P.start + P.marked, 0};
            P.start += P.marked;
            P.marked = 0;
            const int q = static_cast<int>(parts.size());
            for (std::size_t i = fresh.start; i < fresh.end; ++i) part_of[static_cast<std::size_t>(elems[i])] = q;
            parts.push_back(fresh);
            enqueue_part(parts[static_cast<std::size_t>(p)]);
            enqueue_part(fresh);
        }
        // keep the queue from growing without bound
        if (head > 4096 && head * 2 > queue.size()) {
            queue.erase(queue.begin(), queue.begin() + static_cast<std::ptrdiff_t>(head + 1));
            head = static_cast<std::size_t>(-1);
        }
    }

    std::vector<VertexSet> out;
    for (const auto& p : parts) {
        VertexSet s(elems.begin() + static_cast<std::ptrdiff_t>(p.start), elems.begin() + static_cast<std::ptrdiff_t>(p.end));
        std::sort(s.begin(), s.end());
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Smallest module of `g` containing `seed` (vertex ids), by adding splitters.
inline std::vector<char> module_closure(const Graph& g, std::span<const Vertex> seed) {
    const std::size_t n = g.order();
    std::vector<char> in(n, 0);
    std::vector<std::size_t> cnt(n, 0);
    std::size_t size = 0;
    std::vector<Vertex> pending;
    auto add = [&](Vertex y) {
        if (in[static_cast<std::size_t>(y)]) return;
        in[static_cast<std::size_t>(y)] = 1;
        ++size;
        for (Vertex z : g.neighbors(y)) ++cnt[static_cast<std::size_t>(z)];
    };
    for (Vertex v : seed) add(v);
    bool changed = true;
    while (changed && size < n) {
        changed = false;
        pending.clear();
        for (std::size_t z = 0; z < n; ++z)
            if (!in[z] && cnt[z] > 0 && cnt[z] < size) pending.push_back(static_cast<Vertex>(z));
        for (Vertex z : pending) {
            add(z);
            changed = true;
        }
    }
    return in;
}

/// Quotient of g over a partition into modules (adjacency read from representatives).
inline Graph quotient_graph(const Graph& g, const std::vector<VertexSet>& parts) {
    GraphBuilder b(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i)
        for (std::size_t j = i + 1; j < parts.size(); ++j)
            if (g.adjacent(parts[i].front(), parts[j].front())) b.add_edge(static_cast<Vertex>(i), static_cast<Vertex>(j));
    return std::move(b).build();
}

/// Maximal strong modules of a graph that is connected and co-connected.
inline std::vector<VertexSet> maximal_strong_modules(const Graph& g) {
    const Vertex v = 0;
    auto parts = maximal_modules_avoiding(g, v);
    // Quotient over {v} + parts; a part lies in the maximal module around v
    // iff the closure of {v, part} is proper.
    std::vector<VertexSet> q_parts{{v}};
    q_parts.insert(q_parts.end(), parts.begin(), parts.end());
    Graph q = quotient_graph(g, q_parts);

    VertexSet around_v{v};
    std::vector<VertexSet> out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        Vertex seed[2] = {0, static_cast<Vertex>(i + 1)};
        auto in = module_closure(q, seed);
        bool proper = std::find(in.begin(), in.end(), 0) != in.end();
        if (proper)
            around_v.insert(around_v.end(), parts[i].begin(), parts[i].end());
        else
            out.push_back(parts[i]);
    }
    std::sort(around_v.begin(), around_v.end());
    out.push_back(std::move(around_v));
    std::sort(out.begin(), out.end());
    return out;
}

class Decomposer {
   public:
    ParseTree run(const Graph& g) {
        if (g.order() == 0) throw PreconditionError("modular decomposition needs n >= 1");
        VertexSet ids(g.order());
        std::iota(ids.begin(), ids.end(), 0);
        int root = step(g, ids, [] {});
        tree_.finalize(root);
        return std::move(tree_);
    }

   private:
    int step(const Graph& local, const VertexSet& ids, const std::function<void()>& release) {
        if (local.order() == 1) return tree_.add_leaf(ids.front());

        NodeKind kind = NodeKind::Union;
        auto parts = connected_components(local);
        if (parts.size() == 1) {
            kind = NodeKind::Join;
            parts = complement_components(local);
            if (parts.size() == 1) {
                kind = NodeKind::Prime;
                parts = maximal_strong_modules(local);
            }
        }
        Graph quotient;
        if (kind == NodeKind::Prime) quotient = quotient_graph(local, parts);

        std::vector<Graph> subs;
        std::vector<VertexSet> sub_ids;
        subs.reserve(parts.size());
        for (const auto& part : parts) {
            subs.push_back(induced_subgraph(local, part));
            VertexSet mapped;
            mapped.reserve(part.size());
            for (Vertex x : part) mapped.push_back(ids[static_cast<std::size_t>(x)]);
            sub_ids.push_back(std::move(mapped));
        }
        release();

        std::vector<int> children;
        children.reserve(parts.size());
        for (std::size_t i = 0; i < subs.size(); ++i) {
            Graph owned = std::move(subs[i]);
            children.push_back(step(owned, sub_ids[i], [&owned] { owned = Graph(); }));
        }
        return tree_.add_internal(kind, std::move(children), std::move(quotient));
    }

    ParseTree tree_;
};

}  // namespace detail

/// Canonical modular-decomposition tree. Children are ordered by their
/// smallest vertex; Prime quotients use the same order.
inline ParseTree modular_decomposition(const Graph& g) { return detail::Decomposer{}.run(g); }

// ---------------------------------------------------------------------------
// Validation

namespace detail {

/// True iff every vertex of `module` sees the same part of `context \ module`.
inline bool is_module_within(const Graph& g, std::span<const Vertex> context, std::span<const Vertex> module) {
    std::vector<char> in_ctx(g.order(), 0), in_mod(g.order(), 0), outside_of_first(g.order(), 0);
    for (Vertex v : context) in_ctx[static_cast<std::size_t>(v)] = 1;
    for (Vertex v : module) in_mod[static_cast<std::size_t>(v)] = 1;
    std::size_t expect = 0;
    for (Vertex w : g.neighbors(module.front()))
        if (in_ctx[static_cast<std::size_t>(w)] && !in_mod[static_cast<std::size_t>(w)]) {
            outside_of_first[static_cast<std::size_t>(w)] = 1;
            ++expect;
        }
    for (Vertex u : module.subspan(1)) {
        std::size_t seen = 0;
        for (Vertex w : g.neighbors(u)) {
            if (!in_ctx[static_cast<std::size_t>(w)] || in_mod[static_cast<std::size_t>(w)]) continue;
            if (!outside_of_first[static_cast<std::size_t>(w)]) return false;
            ++seen;
        }
        if (seen != expect) return false;
    }
    return true;
}

/// Exhaustive for up to 12 vertices; otherwise every pair closure must be the whole graph
/// (also exact, just slower).
inline bool is_prime_graph(const Graph& q) {
    const std::size_t n = q.order();
    if (n < 3) return false;
    if (n <= 12) {
        VertexSet all(n);
        std::iota(all.begin(), all.end(), 0);
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            int bits = std::popcount(mask);
            if (bits < 2 || static_cast<std::size_t>(bits) == n) continue;
            VertexSet m;
            for (std::size_t i = 0; i < n; ++i)
                if ((mask >> i) & 1u) m.push_back(static_cast<Vertex>(i));
            if (is_module_within(q, all, m)) return false;
        }
        return true;
    }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            Vertex seed[2] = {static_cast<Vertex>(a), static_cast<Vertex>(b)};
            auto in = module_closure(q, seed);
            if (std::find(in.begin(), in.end(), 0) != in.end()) return false;
        }
    return true;
}

}  // namespace detail

/// Checks `t` against `g`; returns human-readable violations (empty when valid).
inline std::vector<std::string> validate_parse_tree(const Graph& g, const ParseTree& t) {
    std::vector<std::string> out;
    const std::size_t n = g.order();
    if (t.root() < 0) return {"tree has no root"};

    std::vector<int> hits(n, 0);
    for (Vertex v : t.leaf_order()) {
        if (v < 0 || static_cast<std::size_t>(v) >= n) {
            out.push_back("leaf vertex " + std::to_string(v) + " out of range");
            continue;
        }
        ++hits[static_cast<std::size_t>(v)];
    }
    for (std::size_t v = 0; v < n; ++v)
        if (hits[v] != 1) out.push_back("vertex " + std::to_string(v) + " appears in " + std::to_string(hits[v]) + " leaves");
    if (!out.empty()) return out;

    for (int id : t.post_order()) {
        const ParseNode& node = t.node(id);
        const std::string where = "node " + std::to_string(id) + " (" + to_string(node.kind) + ")";
        if (node.kind == NodeKind::Leaf) continue;
        if (node.children.size() < 2) {
            out.push_back(where + ": fewer than two children");
            continue;
        }
        const VertexSet context = t.module(id);
        std::vector<VertexSet> mods;
        bool all_modules = true;
        for (int c : node.children) {
            mods.push_back(t.module(c));
            if (!detail::is_module_within(g, context, mods.back())) {
                const auto& m = mods.back();
                std::string members;
                for (std::size_t i = 0; i < m.size() && i < 8; ++i) members += (i ? "," : "") + std::to_string(m[i]);
                out.push_back(where + ": child {" + members + (m.size() > 8 ? ",..." : "") +
                              "} is not a module (neighbourhoods outside it differ)");
                all_modules = false;
            }
            if (t.node(c).kind == node.kind && (node.kind == NodeKind::Union || node.kind == NodeKind::Join))
                out.push_back(where + ": child " + std::to_string(c) + " has the same degenerate kind");
        }
        if (!all_modules) continue;

        Graph actual = detail::quotient_graph(g, mods);
        const std::size_t l = mods.size();
        switch (node.kind) {
            case NodeKind::Union:
                if (actual.size() != 0) out.push_back(where + ": kind mismatch, children are adjacent");
                break;
            case NodeKind::Join:
                if (actual.size() != l * (l - 1) / 2) out.push_back(where + ": kind mismatch, some children are non-adjacent");
                break;
            case NodeKind::Prime:
                if (!(node.quotient == actual))
                    out.push_back(where + ": stored quotient differs from inter-module adjacency");
                else if (!detail::is_prime_graph(actual))
                    out.push_back(where + ": quotient has a nontrivial module");
                break;
            case NodeKind::Leaf: break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Twin classes, iterated type partition, parameters

enum class ClassKind { Independent, Clique };

struct TypePartition {
    std::vector<VertexSet> classes;  // sorted by smallest member
    std::vector<ClassKind> kinds;
    std::vector<int> class_of;       // vertex -> class index

    std::size_t count() const noexcept { return classes.size(); }
};

/// u ~ v iff N(u)\{v} = N(v)\{u}. Singletons are labelled Independent.
inline TypePartition type_partition(const Graph& g) {
    const std::size_t n = g.order();
    std::map<std::vector<Vertex>, VertexSet> open, closed;
    for (std::size_t v = 0; v < n; ++v) {
        auto nb = g.neighbors(static_cast<Vertex>(v));
        std::vector<Vertex> o(nb.begin(), nb.end());
        open[o].push_back(static_cast<Vertex>(v));
        o.insert(std::upper_bound(o.begin(), o.end(), static_cast<Vertex>(v)), static_cast<Vertex>(v));
        closed[std::move(o)].push_back(static_cast<Vertex>(v));
    }
    std::vector<int> group(n, -1);
    std::vector<std::pair<VertexSet, ClassKind>> found;
    for (auto& [key, members] : open)
        if (members.size() > 1) {
            for (Vertex v : members) group[static_cast<std::size_t>(v)] = static_cast<int>(found.size());
            found.emplace_back(members, ClassKind::Independent);
        }
    for (auto& [key, members] : closed)
        if (members.size() > 1) {
            for (Vertex v : members)
                if (group[static_cast<std::size_t>(v)] != -1) throw InvariantError("vertex is both a true and a false twin");
            for (Vertex v : members) group[static_cast<std::size_t>(v)] = static_cast<int>(found.size());
            found.emplace_back(members, ClassKind::Clique);
        }
    for (std::size_t v = 0; v < n; ++v)
        if (group[v] == -1) found.emplace_back(VertexSet{static_cast<Vertex>(v)}, ClassKind::Independent);
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first.front() < b.first.front(); });

    TypePartition tp;
    tp.class_of.assign(n, -1);
    for (auto& [members, kind] : found) {
        for (Vertex v : members) tp.class_of[static_cast<std::size_t>(v)] = static_cast<int>(tp.classes.size());
        tp.classes.push_back(std::move(members));
        tp.kinds.push_back(kind);
    }
    return tp;
}

struct ItpResult {
    std::size_t itp = 0;
    std::vector<Graph> trace;        // starts with the input graph
    std::vector<VertexSet> modules;  // original vertices behind each vertex of the final graph

    const Graph& final_graph() const { return trace.back(); }
};

/// Contracts twin classes until none remain.
inline ItpResult itp_number(const Graph& g) {
    ItpResult res;
    res.trace.push_back(g);
    for (std::size_t v = 0; v < g.order(); ++v) res.modules.push_back({static_cast<Vertex>(v)});
    while (true) {
        const Graph& cur = res.trace.back();
        auto tp = type_partition(cur);
        if (tp.count() == cur.order()) break;
        std::vector<VertexSet> next_modules;
        for (const auto& cls : tp.classes) {
            VertexSet merged;
            for (Vertex x : cls) merged.insert(merged.end(), res.modules[static_cast<std::size_t>(x)].begin(),
                                                res.modules[static_cast<std::size_t>(x)].end());
            std::sort(merged.begin(), merged.end());
            next_modules.push_back(std::move(merged));
        }
        Graph q = detail::quotient_graph(cur, tp.classes);
        res.modules = std::move(next_modules);
        res.trace.push_back(std::move(q));
    }
    res.itp = res.trace.back().order();
    return res;
}

struct StructuralParams {
    std::size_t mw = 0;
    std::size_t nd = 0;
    std::size_t itp = 0;
};

/// Bundles mw, nd, itp and checks mw <= max(itp, 2) and itp <= nd (skipped for n = 1).
inline StructuralParams structural_params(const Graph& g, const ParseTree& tree) {
    StructuralParams p;
    p.mw = tree.width();
    p.nd = type_partition(g).count();
    p.itp = itp_number(g).itp;
    if (g.order() > 1 && (p.mw > std::max<std::size_t>(p.itp, 2) || p.itp > p.nd))
        throw InvariantError("parameter chain violated: mw=" + std::to_string(p.mw) + " itp=" + std::to_string(p.itp) +
                             " nd=" + std::to_string(p.nd));
    return p;
}

inline StructuralParams structural_params(const Graph& g) { return structural_params(g, modular_decomposition(g)); }

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::ordered_json to_json(const ParseTree& t, int id) {
    const ParseNode& node = t.node(id);
    nlohmann::ordered_json j;
    j["kind"] = to_string(node.kind);
    if (node.kind == NodeKind::Leaf) {
        j["vertex"] = node.vertex;
        return j;
    }
    if (node.kind == NodeKind::Prime) {
        auto edges = nlohmann::ordered_json::array();
        for (auto [a, b] : node.quotient.edges()) edges.push_back({a, b});
        j["quotient_edges"] = std::move(edges);
    }
    auto children = nlohmann::ordered_json::array();
    for (int c : node.children) children.push_back(to_json(t, c));
    j["children"] = std::move(children);
    return j;
}

inline nlohmann::ordered_json to_json(const ParseTree& t) { return to_json(t, t.root()); }

}  // namespace drdom
