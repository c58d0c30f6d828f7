#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "decomposition.hpp"
#include "graph.hpp"
#include "oracle.hpp"

namespace drdom {

/// Modular partition read off the root of the decomposition tree. A Join root
/// is coarsened to two modules (first child, everything else) so the quotient
/// never has more vertices than the modular width.
struct TopPartition {
    std::vector<VertexSet> modules;
    Graph quotient;
};

inline TopPartition top_modular_partition(const Graph& g, const ParseTree& tree) {
    const ParseNode& root = tree.node(tree.root());
    TopPartition tp;
    switch (root.kind) {
        case NodeKind::Leaf: tp.modules.push_back(tree.module(tree.root())); break;
        case NodeKind::Prime:
            for (int c : root.children) tp.modules.push_back(tree.module(c));
            break;
        case NodeKind::Join: {
            tp.modules.push_back(tree.module(root.children.front()));
            VertexSet rest;
            for (std::size_t i = 1; i < root.children.size(); ++i) {
                auto m = tree.module(root.children[i]);
                rest.insert(rest.end(), m.begin(), m.end());
            }
            std::sort(rest.begin(), rest.end());
            tp.modules.push_back(std::move(rest));
            break;
        }
        case NodeKind::Union:
            for (int c : root.children) tp.modules.push_back(tree.module(c));
            break;
    }
    tp.quotient = detail::quotient_graph(g, tp.modules);
    return tp;
}

inline TopPartition top_modular_partition(const Graph& g) { return top_modular_partition(g, modular_decomposition(g)); }

/// Some vertex of `module` is adjacent to all other members.
inline bool has_universal_vertex(const Graph& g, const VertexSet& module) {
    for (Vertex v : module) {
        std::size_t inside = 0;
        for (Vertex w : g.neighbors(v))
            if (std::binary_search(module.begin(), module.end(), w)) ++inside;
        if (inside + 1 == module.size()) return true;
    }
    return false;
}

struct ColoredInstance {
    Graph h;
    std::string colors;  // one 'B' or 'W' per vertex of h
    int budget = 0;
    std::vector<VertexSet> modules;  // vertices of G^r behind each vertex of h
};

/// S is a colored dominating set: every vertex that is black, or not in S, has a neighbour in S.
inline bool is_colored_dominating(const Graph& h, const std::string& colors, const VertexSet& s) {
    std::vector<char> in(h.order(), 0);
    for (Vertex v : s) in[static_cast<std::size_t>(v)] = 1;
    for (std::size_t v = 0; v < h.order(); ++v) {
        if (colors[v] == 'W' && in[v]) continue;
        bool hit = false;
        for (Vertex w : h.neighbors(static_cast<Vertex>(v)))
            if (in[static_cast<std::size_t>(w)]) {
                hit = true;
                break;
            }
        if (!hit) return false;
    }
    return true;
}

/// Compresses "(1,r)-dominating set of size <= k in connected g" to Colored
/// Domination on the quotient of G^r. A module is white iff it has a vertex
/// dominating the whole module.
inline ColoredInstance reduce_to_colored(const Graph& g, int r, int k) {
    if (r < 1 || k < 1) throw PreconditionError("reduce_to_colored needs r, k >= 1");
    if (g.order() < 2) throw PreconditionError("reduce_to_colored needs n >= 2");
    if (!is_connected(g)) throw PreconditionError("colored compression requires a connected graph");
    Graph power = graph_power(g, r);
    auto top = top_modular_partition(power);
    ColoredInstance ci;
    for (const auto& m : top.modules) ci.colors.push_back(has_universal_vertex(power, m) ? 'W' : 'B');
    ci.budget = std::min<int>(k, static_cast<int>(top.modules.size()));
    ci.h = std::move(top.quotient);
    ci.modules = std::move(top.modules);
    return ci;
}

/// Smallest colored dominating set within the budget, lexicographic among
/// minimum ones; nullopt when none fits.
inline std::optional<VertexSet> solve_colored_bruteforce(const ColoredInstance& ci, const OracleOptions& opt = {}) {
    detail::check_cap(ci.h, opt.cap);
    const std::size_t n = ci.h.order();
    std::optional<VertexSet> found;
    for (std::size_t k = 0; k <= n && k <= static_cast<std::size_t>(std::max(ci.budget, 0)) && !found; ++k) {
        detail::for_each_subset_of_size(n, k, opt.deadline, [&](detail::Mask, const std::vector<int>& idx) {
            VertexSet s(idx.begin(), idx.end());
            if (!is_colored_dominating(ci.h, ci.colors, s)) return false;
            found = std::move(s);
            return true;
        });
    }
    return found;
}

/// Expands a colored solution to a dominating set of G^r: a white module
/// contributes its universal vertex, a black one its smallest vertex.
inline VertexSet expand_colored(const Graph& power, const ColoredInstance& ci, const VertexSet& s) {
    VertexSet out;
    for (Vertex i : s) {
        const auto& m = ci.modules[static_cast<std::size_t>(i)];
        Vertex pick = m.front();
        if (ci.colors[static_cast<std::size_t>(i)] == 'W')
            for (Vertex v : m) {
                std::size_t inside = 0;
                for (Vertex w : power.neighbors(v))
                    if (std::binary_search(m.begin(), m.end(), w)) ++inside;
                if (inside + 1 == m.size()) {
                    pick = v;
                    break;
                }
            }
        out.push_back(pick);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline nlohmann::ordered_json to_json(const ColoredInstance& ci) {
    nlohmann::ordered_json j;
    auto edges = nlohmann::ordered_json::array();
    for (auto [a, b] : ci.h.edges()) edges.push_back({a, b});
    j["h_edges"] = std::move(edges);
    j["colors"] = ci.colors;
    j["budget"] = ci.budget;
    return j;
}

struct StructureCheck {
    std::optional<VertexSet> witness;  // a minimum dominating set meeting clauses (a)-(c)
    std::size_t minimum_size = 0;
    std::size_t solutions_examined = 0;
    TopPartition partition;
};

/// Searches all minimum dominating sets of connected g for one that takes at
/// most one vertex per top-level module (a), leaves a module empty only when a
/// neighbouring module is used (b), and uses an isolated-in-S module only when
/// that module has a universal vertex (c).
inline StructureCheck solution_structure_check(const Graph& g, const OracleOptions& opt = {}) {
    if (!is_connected(g)) throw PreconditionError("structure check requires a connected graph");
    StructureCheck res;
    res.partition = top_modular_partition(g);
    const auto& mods = res.partition.modules;
    const Graph& h = res.partition.quotient;
    std::vector<int> module_of(g.order(), -1);
    for (std::size_t i = 0; i < mods.size(); ++i)
        for (Vertex v : mods[i]) module_of[static_cast<std::size_t>(v)] = static_cast<int>(i);
    std::vector<char> universal;
    for (const auto& m : mods) universal.push_back(has_universal_vertex(g, m));

    auto all = all_minimum_solutions({g, 1, 1, {}}, opt);
    res.minimum_size = all.empty() ? 0 : all.front().size();
    for (const auto& s : all) {
        ++res.solutions_examined;
        std::vector<int> hits(mods.size(), 0);
        for (Vertex v : s) ++hits[static_cast<std::size_t>(module_of[static_cast<std::size_t>(v)])];
        bool ok = true;
        for (std::size_t i = 0; i < mods.size() && ok; ++i) {
            if (hits[i] > 1) ok = false;
            bool nbr_used = false;
            for (Vertex j : h.neighbors(static_cast<Vertex>(i)))
                if (hits[static_cast<std::size_t>(j)] == 1) nbr_used = true;
            if (hits[i] == 0 && !nbr_used) ok = false;
            if (hits[i] == 1 && !nbr_used && !universal[i]) ok = false;
        }
        if (ok) {
            res.witness = s;
            break;
        }
    }
    return res;
}

}  // namespace drdom
