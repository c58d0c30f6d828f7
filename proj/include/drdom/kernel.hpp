#pragma once

#include <chrono>
#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "decomposition.hpp"
#include "graph.hpp"

namespace drdom {

struct KernelReport {
    std::size_t original_n = 0, original_m = 0;
    std::size_t kernel_n = 0, kernel_m = 0;
    std::size_t nd = 0;
    int d = 1;
    std::size_t bound = 0;  // 2d * nd
    std::size_t forced_removed = 0;
    double elapsed_ms = 0;
};

struct Kernel {
    Graph graph;
    std::vector<Vertex> original_id;  // kernel vertex -> vertex of the input graph
    KernelReport report;
    /// Pruned vertices that sat in every solution of g (fewer than d vertices
    /// within distance r). (g, k) is equivalent to (graph, k - budget_offset).
    std::size_t budget_offset = 0;
};

/// Keeps the 2d smallest vertices of every twin class and drops the rest.
/// `r` does not change the pruned graph, only the forced-vertex count.
///
/// The pruned graph alone preserves "is there a (d,r)-dominating set of size
/// <= k" only when no pruned class is forced: in K_{1,9} with d = 2 all nine
/// leaves must be chosen, but K_{1,4} needs four. Forced classes are pruned
/// all the same and the dropped members are counted in budget_offset.
inline Kernel kernelize_nd(const Graph& g, int d, int r) {
    if (d < 1 || r < 1) throw PreconditionError("kernelize_nd needs d, r >= 1");
    const auto started = std::chrono::steady_clock::now();
    const auto tp = type_partition(g);
    const auto keep_per_class = static_cast<std::size_t>(2 * d);

    Kernel k;
    for (const auto& cls : tp.classes) {
        for (std::size_t i = 0; i < cls.size() && i < keep_per_class; ++i) k.original_id.push_back(cls[i]);
        // twins have equal r-balls up to each other, so one member decides for the class
        if (cls.size() > keep_per_class && ball(g, cls.front(), r).size() < static_cast<std::size_t>(d))
            k.budget_offset += cls.size() - keep_per_class;
    }
    std::sort(k.original_id.begin(), k.original_id.end());
    k.graph = induced_subgraph(g, k.original_id);

    auto& rep = k.report;
    rep.original_n = g.order();
    rep.original_m = g.size();
    rep.kernel_n = k.graph.order();
    rep.kernel_m = k.graph.size();
    rep.nd = tp.count();
    rep.d = d;
    rep.bound = keep_per_class * tp.count();
    rep.forced_removed = k.budget_offset;
    rep.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    if (rep.kernel_n > std::min(rep.original_n, rep.bound)) throw InvariantError("kernel exceeds 2d*nd vertices");
    return k;
}

inline nlohmann::ordered_json to_json(const KernelReport& r) {
    nlohmann::ordered_json j;
    j["original"] = {{"n", r.original_n}, {"m", r.original_m}};
    j["kernel"] = {{"n", r.kernel_n}, {"m", r.kernel_m}};
    j["nd"] = r.nd;
    j["d"] = r.d;
    j["bound"] = r.bound;
    j["forced_removed"] = r.forced_removed;
    j["ms"] = r.elapsed_ms;
    return j;
}

}  // namespace drdom
