#pragma once

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"

namespace drdom {

/// Default vertex cap of the exhaustive oracle; DRDOM_ORACLE_CAP overrides it.
inline std::size_t default_oracle_cap() {
    if (const char* env = std::getenv("DRDOM_ORACLE_CAP")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(std::min<unsigned long>(v, 64));
    }
    return 24;
}

struct OracleOptions {
    std::size_t cap = default_oracle_cap();
    Deadline deadline = Deadline::never();
};

namespace detail {

using Mask = std::uint64_t;

/// r-balls as bitmasks, excluding the centre.
inline std::vector<Mask> ball_masks(const Graph& g, int r) {
    std::vector<Mask> out(g.order(), 0);
    for (std::size_t v = 0; v < g.order(); ++v)
        for (Vertex u : ball(g, static_cast<Vertex>(v), r)) out[v] |= Mask{1} << u;
    return out;
}

inline bool dominates(const std::vector<Mask>& balls, int d, Mask s) {
    for (std::size_t v = 0; v < balls.size(); ++v) {
        if ((s >> v) & 1u) continue;
        if (std::popcount(balls[v] & s) < d) return false;
    }
    return true;
}

inline void check_cap(const Graph& g, std::size_t cap) {
    if (cap > 64) cap = 64;
    if (g.order() > cap)
        throw CapExceeded("oracle refuses n=" + std::to_string(g.order()) + " (cap " + std::to_string(cap) + ")");
}

/// Visits every k-subset of {0..n-1} in lexicographic order until `visit` returns true.
inline bool for_each_subset_of_size(std::size_t n, std::size_t k, const Deadline& deadline,
                                    const std::function<bool(Mask, const std::vector<int>&)>& visit) {
    std::vector<int> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = static_cast<int>(i);
    std::size_t ticks = 0;
    while (true) {
        deadline.poll(ticks);
        Mask m = 0;
        for (int i : idx) m |= Mask{1} << i;
        if (visit(m, idx)) return true;
        // advance to next combination
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == static_cast<int>(n - k + i - 1)) --i;
        if (i == 0) return false;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace detail

/// Exhaustive minimum (d,r)-dominating set. Subsets are scanned by increasing
/// size, each size in lexicographic order, so the result is the
/// lexicographically smallest minimum solution.
inline Solution brute_force_min(const DominationInstance& inst, const OracleOptions& opt = {}) {
    inst.validate();
    const Graph& g = inst.graph;
    detail::check_cap(g, opt.cap);
    const auto balls = detail::ball_masks(g, inst.r);
    const std::size_t n = g.order();
    Solution sol;
    sol.method = "oracle";
    for (std::size_t k = 0; k <= n; ++k) {
        bool found = detail::for_each_subset_of_size(n, k, opt.deadline, [&](detail::Mask m, const std::vector<int>& idx) {
            if (!detail::dominates(balls, inst.d, m)) return false;
            sol.vertices.assign(idx.begin(), idx.end());
            return true;
        });
        if (found) break;
    }
    sol.valid = is_dr_dominating(g, inst.d, inst.r, sol.vertices);
    if (!sol.valid) throw InvariantError("oracle produced a non-dominating set");
    return sol;
}

/// Every minimum (d,r)-dominating set, in lexicographic order.
inline std::vector<VertexSet> all_minimum_solutions(const DominationInstance& inst, const OracleOptions& opt = {}) {
    inst.validate();
    const Graph& g = inst.graph;
    detail::check_cap(g, opt.cap);
    const auto balls = detail::ball_masks(g, inst.r);
    const std::size_t n = g.order();
    std::vector<VertexSet> out;
    for (std::size_t k = 0; k <= n && out.empty(); ++k) {
        detail::for_each_subset_of_size(n, k, opt.deadline, [&](detail::Mask m, const std::vector<int>& idx) {
            if (detail::dominates(balls, inst.d, m)) out.emplace_back(idx.begin(), idx.end());
            return false;
        });
    }
    return out;
}

}  // namespace drdom
