#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "decomposition.hpp"
#include "errors.hpp"
#include "graph.hpp"

namespace drdom {

/// A non-negative cost or "unreachable". Unreachable absorbs addition and
/// compares greater than every finite value.
class Cost {
   public:
    constexpr Cost() = default;
    constexpr Cost(std::int64_t v) : value_(v) {}  // NOLINT(google-explicit-constructor)

    static constexpr Cost unreachable() { return Cost{}; }

    constexpr bool finite() const noexcept { return value_.has_value(); }
    constexpr std::int64_t value() const {
        if (!value_) throw InvariantError("reading an unreachable cost");
        return *value_;
    }

    friend constexpr Cost operator+(Cost a, Cost b) {
        if (!a.finite() || !b.finite()) return unreachable();
        return Cost{*a.value_ + *b.value_};
    }
    friend constexpr bool operator==(const Cost& a, const Cost& b) = default;
    friend constexpr std::strong_ordering operator<=>(const Cost& a, const Cost& b) {
        if (a.finite() != b.finite()) return a.finite() ? std::strong_ordering::less : std::strong_ordering::greater;
        if (!a.finite()) return std::strong_ordering::equal;
        return *a.value_ <=> *b.value_;
    }

   private:
    std::optional<std::int64_t> value_;
};

inline nlohmann::ordered_json to_json(const Cost& c) { return c.finite() ? nlohmann::ordered_json(c.value()) : nlohmann::ordered_json(nullptr); }

enum class DpVariant { Paper, Extended };

inline const char* to_string(DpVariant v) { return v == DpVariant::Paper ? "dp-paper" : "dp-extended"; }

/// Demand satisfied inside a child module (t_i) and number of its vertices placed in S (p_i).
struct ChildChoice {
    int demand = 0;
    std::int64_t placed = 0;

    friend bool operator==(const ChildChoice&, const ChildChoice&) = default;
};

/// c[t] = minimum size of a (t,1)-dominating set of the module, t = 0..d,
/// plus the child assignment that attains it.
struct CostTable {
    std::size_t module_size = 0;
    std::vector<Cost> c;
    std::vector<std::vector<ChildChoice>> choice;  // choice[t][i]; empty for leaves
};

struct DpStats {
    std::uint64_t assignments = 0;  // child assignments examined
};

struct DpOptions {
    DpVariant variant = DpVariant::Extended;
    /// Recompute Union/Join nodes with the generic search and compare.
    bool check_fast_paths = false;
};

namespace detail {

struct Option {
    std::int64_t placed;
    int demand;
};

/// Per-child alternatives for target t, sorted by placement. For each placement
/// only the largest internal demand it can pay for is kept.
inline std::vector<Option> child_options(const CostTable& child, int t, int d, DpVariant variant) {
    std::vector<std::int64_t> placements;
    for (int s = 0; s <= t; ++s)
        if (child.c[static_cast<std::size_t>(s)].finite()) placements.push_back(child.c[static_cast<std::size_t>(s)].value());
    if (variant == DpVariant::Extended) {
        const auto cap = std::min<std::int64_t>(d, static_cast<std::int64_t>(child.module_size));
        for (std::int64_t p = 0; p <= cap; ++p) placements.push_back(p);
    }
    std::sort(placements.begin(), placements.end());
    placements.erase(std::unique(placements.begin(), placements.end()), placements.end());
    std::vector<Option> out;
    for (auto p : placements) {
        int best = -1;
        for (int s = 0; s <= t; ++s)
            if (child.c[static_cast<std::size_t>(s)].finite() && child.c[static_cast<std::size_t>(s)].value() <= p) best = s;
        if (best >= 0) out.push_back({p, best});
    }
    return out;
}

struct NodeResult {
    Cost cost = Cost::unreachable();
    std::vector<ChildChoice> choice;
};

/// Exhaustive depth-first search over child options for an arbitrary quotient.
/// Options are tried in increasing placement so the first optimum found has the
/// lexicographically smallest placement vector.
inline NodeResult search_generic(const Graph& h, const std::vector<std::vector<Option>>& opts, int t, DpStats& stats) {
    const std::size_t l = opts.size();
    std::vector<std::vector<int>> checks_at(l);
    for (std::size_t i = 0; i < l; ++i) {
        std::size_t last = i;
        for (Vertex j : h.neighbors(static_cast<Vertex>(i))) last = std::max(last, static_cast<std::size_t>(j));
        checks_at[last].push_back(static_cast<int>(i));
    }
    std::vector<std::int64_t> min_rest(l + 1, 0);
    for (std::size_t i = l; i-- > 0;) {
        if (opts[i].empty()) return {};
        min_rest[i] = min_rest[i + 1] + opts[i].front().placed;
    }

    std::vector<int> pick(l, 0), best_pick;
    std::vector<std::int64_t> placed(l, 0);
    std::optional<std::int64_t> best;

    std::function<void(std::size_t, std::int64_t)> dfs = [&](std::size_t i, std::int64_t cost) {
        if (best && cost + min_rest[i] >= *best) return;
        if (i == l) {
            best = cost;
            best_pick = pick;
            return;
        }
        for (std::size_t k = 0; k < opts[i].size(); ++k) {
            ++stats.assignments;
            pick[i] = static_cast<int>(k);
            placed[i] = opts[i][k].placed;
            bool ok = true;
            for (int c : checks_at[i]) {
                std::int64_t got = opts[static_cast<std::size_t>(c)][static_cast<std::size_t>(pick[static_cast<std::size_t>(c)])].demand;
                for (Vertex j : h.neighbors(c)) got += placed[static_cast<std::size_t>(j)];
                if (got < t) {
                    ok = false;
                    break;
                }
            }
            if (ok) dfs(i + 1, cost + placed[i]);
        }
    };
    dfs(0, 0);

    NodeResult res;
    if (!best) return res;
    res.cost = *best;
    for (std::size_t i = 0; i < l; ++i) {
        const Option& o = opts[i][static_cast<std::size_t>(best_pick[i])];
        res.choice.push_back({o.demand, o.placed});
    }
    return res;
}

/// Edgeless quotient: children are independent, each must meet t on its own.
inline NodeResult search_union(const std::vector<const CostTable*>& kids, int t) {
    NodeResult res;
    res.cost = 0;
    for (const CostTable* k : kids) {
        Cost c = k->c[static_cast<std::size_t>(t)];
        res.cost = res.cost + c;
        if (!c.finite()) return {};
        res.choice.push_back({t, c.value()});
    }
    return res;
}

/// Complete quotient. A child placing p receives P - p from the others, where P
/// is the total, so each candidate P is a subset-sum over per-child options.
/// P is tried in increasing order; the reconstruction walks children greedily
/// so the placement vector is lexicographically smallest.
inline NodeResult search_join(const std::vector<std::vector<Option>>& opts, int t, DpStats& stats) {
    const std::size_t l = opts.size();
    std::int64_t upper = 0;
    for (const auto& o : opts) {
        if (o.empty()) return {};
        upper += o.back().placed;
    }
    std::vector<std::vector<char>> reach;
    for (std::int64_t total = 0; total <= upper; ++total) {
        auto allowed = [&](const Option& o) { return o.demand + (total - o.placed) >= t; };
        const auto width = static_cast<std::size_t>(total + 1);
        reach.assign(l + 1, std::vector<char>(width, 0));
        reach[l][0] = 1;
        for (std::size_t i = l; i-- > 0;) {
            for (const Option& o : opts[i]) {
                ++stats.assignments;
                if (o.placed > total || !allowed(o)) continue;
                for (std::size_t s = static_cast<std::size_t>(o.placed); s < width; ++s)
                    if (reach[i + 1][s - static_cast<std::size_t>(o.placed)]) reach[i][s] = 1;
            }
        }
        if (!reach[0][width - 1]) continue;

        NodeResult res;
        res.cost = total;
        std::int64_t rem = total;
        for (std::size_t i = 0; i < l; ++i) {
            for (const Option& o : opts[i]) {
                if (o.placed > rem || !allowed(o) || !reach[i + 1][static_cast<std::size_t>(rem - o.placed)]) continue;
                res.choice.push_back({o.demand, o.placed});
                rem -= o.placed;
                break;
            }
        }
        if (rem != 0 || res.choice.size() != l) throw InvariantError("join reconstruction failed");
        return res;
    }
    return {};
}

inline bool is_complete(const Graph& h) { return h.size() * 2 == h.order() * (h.order() - 1); }

inline Graph complete_graph(std::size_t n) {
    GraphBuilder b(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) b.add_edge(static_cast<Vertex>(i), static_cast<Vertex>(j));
    return std::move(b).build();
}

}  // namespace detail

enum class QuotientShape { Edgeless, Complete, General };

namespace detail {

inline CostTable combine(QuotientShape shape, const Graph* h, const std::vector<const CostTable*>& children, int d,
                         const DpOptions& opt, DpStats& stats) {
    if (children.size() < 2) throw PreconditionError("an internal node needs at least two children");
    CostTable out;
    for (const CostTable* k : children) {
        if (k->c.size() != static_cast<std::size_t>(d + 1)) throw PreconditionError("child table has wrong length");
        out.module_size += k->module_size;
    }
    out.c.assign(static_cast<std::size_t>(d + 1), Cost::unreachable());
    out.choice.assign(static_cast<std::size_t>(d + 1), {});
    out.c[0] = 0;
    out.choice[0].assign(children.size(), ChildChoice{0, 0});

    // the generic search is only affordable as a cross-check on small nodes
    const bool check = opt.check_fast_paths && shape != QuotientShape::General && children.size() <= 10;
    Graph check_h;
    if (check) check_h = shape == QuotientShape::Edgeless ? Graph(children.size()) : complete_graph(children.size());

    for (int t = 1; t <= d; ++t) {
        std::vector<std::vector<Option>> opts;
        if (shape != QuotientShape::Edgeless || check)
            for (const CostTable* k : children) opts.push_back(child_options(*k, t, d, opt.variant));

        NodeResult res;
        switch (shape) {
            case QuotientShape::Edgeless: res = search_union(children, t); break;
            case QuotientShape::Complete: res = search_join(opts, t, stats); break;
            case QuotientShape::General: res = search_generic(*h, opts, t, stats); break;
        }
        if (check) {
            DpStats scratch;
            auto slow = search_generic(check_h, opts, t, scratch);
            if (!(slow.cost == res.cost) || slow.choice != res.choice)
                throw InvariantError("fast path disagrees with generic search at t=" + std::to_string(t));
        }
        out.c[static_cast<std::size_t>(t)] = res.cost;
        out.choice[static_cast<std::size_t>(t)] = std::move(res.choice);
    }
    return out;
}

}  // namespace detail

/// Table of a module with quotient `h` whose i-th vertex is the module of
/// `children[i]`. Edgeless and complete quotients take the Union/Join fast paths.
inline CostTable cost_table(const Graph& h, const std::vector<const CostTable*>& children, int d, const DpOptions& opt,
                            DpStats& stats) {
    if (h.order() != children.size()) throw PreconditionError("quotient order differs from child count");
    QuotientShape shape = QuotientShape::General;
    if (h.size() == 0)
        shape = QuotientShape::Edgeless;
    else if (detail::is_complete(h))
        shape = QuotientShape::Complete;
    return detail::combine(shape, &h, children, d, opt, stats);
}

/// Single-demand semantics: child i contributes c_i(t_i) vertices and must meet
/// t_i >= t - sum over quotient neighbours j of c_j(t_j).
inline CostTable cost_table_paper(const Graph& h, const std::vector<const CostTable*>& children, int d) {
    DpStats stats;
    return cost_table(h, children, d, {DpVariant::Paper, false}, stats);
}

/// Exact variant: a child may additionally hold up to min(d, |M_i|) padding
/// vertices beyond its internal (t_i,1)-dominating set.
inline CostTable cost_table_extended(const Graph& h, const std::vector<const CostTable*>& children, int d) {
    DpStats stats;
    return cost_table(h, children, d, {DpVariant::Extended, false}, stats);
}

inline CostTable leaf_table(int d) {
    CostTable leaf;
    leaf.module_size = 1;
    leaf.c.assign(static_cast<std::size_t>(d + 1), Cost{1});
    leaf.c[0] = 0;
    leaf.choice.assign(static_cast<std::size_t>(d + 1), {});
    return leaf;
}

/// Exhaustive single-demand loop over all (t_1..t_l) in {0..t}^l. Only
/// values, no witnesses; `iterations` counts inner-loop bodies.
inline std::vector<Cost> single_demand_exhaustive(const Graph& h, const std::vector<std::vector<Cost>>& child_costs, int d,
                                                   std::uint64_t* iterations = nullptr) {
    const std::size_t l = child_costs.size();
    if (l > 16) throw CapExceeded("single_demand_exhaustive is limited to 16 children");
    std::vector<Cost> c(static_cast<std::size_t>(d + 1), Cost::unreachable());
    c[0] = 0;
    for (int t = 1; t <= d; ++t) {
        std::vector<int> ts(l, 0);
        while (true) {
            if (iterations) ++*iterations;
            bool feasible = true;
            for (std::size_t i = 0; i < l && feasible; ++i) {
                Cost from_nbrs = 0;
                for (Vertex j : h.neighbors(static_cast<Vertex>(i)))
                    from_nbrs = from_nbrs + child_costs[static_cast<std::size_t>(j)][static_cast<std::size_t>(ts[static_cast<std::size_t>(j)])];
                // unreachable neighbour costs make the right-hand side -infinity
                if (from_nbrs.finite() && ts[i] < t - from_nbrs.value()) feasible = false;
            }
            if (feasible) {
                Cost sum = 0;
                for (std::size_t i = 0; i < l; ++i) sum = sum + child_costs[i][static_cast<std::size_t>(ts[i])];
                if (sum < c[static_cast<std::size_t>(t)]) c[static_cast<std::size_t>(t)] = sum;
            }
            std::size_t k = 0;
            while (k < l && ts[k] == t) ts[k++] = 0;
            if (k == l) break;
            ++ts[k];
        }
    }
    return c;
}

// ---------------------------------------------------------------------------
// Whole-tree dynamic program

struct DpResult {
    ParseTree tree;
    std::vector<CostTable> tables;  // indexed by node id
    int d = 1;
    DpVariant variant = DpVariant::Extended;
    DpStats stats;

    const CostTable& root_table() const { return tables[static_cast<std::size_t>(tree.root())]; }
};

inline DpResult compute_tables(ParseTree tree, int d, const DpOptions& opt = {}) {
    if (d < 1) throw PreconditionError("demand d must be >= 1");
    DpResult res;
    res.d = d;
    res.variant = opt.variant;
    res.tables.resize(tree.node_count());
    for (int id : tree.post_order()) {
        const ParseNode& node = tree.node(id);
        if (node.kind == NodeKind::Leaf) {
            res.tables[static_cast<std::size_t>(id)] = leaf_table(d);
            continue;
        }
        std::vector<const CostTable*> kids;
        for (int c : node.children) kids.push_back(&res.tables[static_cast<std::size_t>(c)]);
        QuotientShape shape = node.kind == NodeKind::Union  ? QuotientShape::Edgeless
                              : node.kind == NodeKind::Join ? QuotientShape::Complete
                                                            : QuotientShape::General;
        res.tables[static_cast<std::size_t>(id)] = detail::combine(shape, &node.quotient, kids, d, opt, res.stats);
    }
    res.tree = std::move(tree);
    return res;
}

inline DpResult compute_tables(const Graph& g, int d, const DpOptions& opt = {}) {
    return compute_tables(modular_decomposition(g), d, opt);
}

namespace detail {

inline void collect_witness(const DpResult& dp, int id, int t, VertexSet& out) {
    if (t == 0) return;
    const ParseNode& node = dp.tree.node(id);
    if (node.kind == NodeKind::Leaf) {
        out.push_back(node.vertex);
        return;
    }
    const auto& choice = dp.tables[static_cast<std::size_t>(id)].choice[static_cast<std::size_t>(t)];
    for (std::size_t i = 0; i < node.children.size(); ++i) {
        const int child = node.children[i];
        const std::size_t before = out.size();
        collect_witness(dp, child, choice[i].demand, out);
        const auto got = static_cast<std::int64_t>(out.size() - before);
        if (got > choice[i].placed) throw InvariantError("child witness exceeds its placement");
        if (got == choice[i].placed) continue;
        // pad with the smallest unused vertices of the child module
        VertexSet used(out.begin() + static_cast<std::ptrdiff_t>(before), out.end());
        std::sort(used.begin(), used.end());
        std::int64_t need = choice[i].placed - got;
        for (Vertex v : dp.tree.module(child)) {
            if (need == 0) break;
            if (std::binary_search(used.begin(), used.end(), v)) continue;
            out.push_back(v);
            --need;
        }
        if (need != 0) throw InvariantError("module too small for its placement");
    }
}

}  // namespace detail

/// Reconstructs a minimum (t,1)-dominating set of the module at `node`.
inline VertexSet reconstruct(const DpResult& dp, int node, int t) {
    VertexSet out;
    detail::collect_witness(dp, node, t, out);
    std::sort(out.begin(), out.end());
    const Cost expect = dp.tables[static_cast<std::size_t>(node)].c[static_cast<std::size_t>(t)];
    if (!expect.finite() || static_cast<std::int64_t>(out.size()) != expect.value())
        throw InvariantError("witness size differs from table value");
    return out;
}

/// Minimum (d,1)-dominating set via the modular-decomposition DP.
inline Solution solve_d1_modular(const Graph& g, int d, DpVariant variant = DpVariant::Extended, DpResult* keep = nullptr) {
    if (d < 1) throw PreconditionError("demand d must be >= 1");
    DpResult dp = compute_tables(g, d, {variant, false});
    Solution sol;
    sol.method = to_string(variant);
    sol.vertices = reconstruct(dp, dp.tree.root(), d);
    sol.valid = is_dr_dominating(g, d, 1, sol.vertices);
    if (!sol.valid) throw InvariantError(std::string(to_string(variant)) + " produced a non-dominating set");
    if (keep) *keep = std::move(dp);
    return sol;
}

/// Minimum (d,r)-dominating set: run the (d,1) solver on G^r, then re-check on G.
inline Solution solve_dr(const Graph& g, int d, int r, DpVariant variant = DpVariant::Extended, DpResult* keep = nullptr) {
    if (r < 1) throw PreconditionError("radius r must be >= 1");
    Solution sol = r == 1 ? solve_d1_modular(g, d, variant, keep) : solve_d1_modular(graph_power(g, r), d, variant, keep);
    sol.valid = is_dr_dominating(g, d, r, sol.vertices);
    if (!sol.valid) throw InvariantError("solution fails verification on the original graph");
    return sol;
}

inline nlohmann::ordered_json tables_to_json(const DpResult& dp) {
    auto arr = nlohmann::ordered_json::array();
    for (int id : dp.tree.post_order()) {
        const auto& node = dp.tree.node(id);
        const auto& table = dp.tables[static_cast<std::size_t>(id)];
        nlohmann::ordered_json j;
        j["node"] = id;
        j["kind"] = to_string(node.kind);
        j["module_size"] = table.module_size;
        auto c = nlohmann::ordered_json::array();
        for (const auto& v : table.c) c.push_back(to_json(v));
        j["c"] = std::move(c);
        arr.push_back(std::move(j));
    }
    nlohmann::ordered_json out;
    out["variant"] = to_string(dp.variant);
    out["d"] = dp.d;
    out["assignments"] = dp.stats.assignments;
    out["tables"] = std::move(arr);
    return out;
}

}  // namespace drdom
