#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"

namespace drdom::gen {

using Rng = std::mt19937_64;

/// Per-trial seed; a splitmix64 step over (master, index).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline Graph path(std::size_t n) {
    GraphBuilder b(n);
    for (std::size_t i = 1; i < n; ++i) b.add_edge(static_cast<Vertex>(i - 1), static_cast<Vertex>(i));
    return std::move(b).build();
}

inline Graph cycle(std::size_t n) {
    if (n < 3) return path(n);
    GraphBuilder b(n);
    for (std::size_t i = 0; i < n; ++i) b.add_edge(static_cast<Vertex>(i), static_cast<Vertex>((i + 1) % n));
    return std::move(b).build();
}

/// Vertex 0 is the centre.
inline Graph star(std::size_t n) {
    GraphBuilder b(n);
    for (std::size_t i = 1; i < n; ++i) b.add_edge(0, static_cast<Vertex>(i));
    return std::move(b).build();
}

inline Graph complete(std::size_t n) {
    GraphBuilder b(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) b.add_edge(static_cast<Vertex>(i), static_cast<Vertex>(j));
    return std::move(b).build();
}

/// Sides {0..a-1} and {a..a+b-1}.
inline Graph complete_bipartite(std::size_t a, std::size_t b) {
    GraphBuilder gb(a + b);
    for (std::size_t i = 0; i < a; ++i)
        for (std::size_t j = 0; j < b; ++j) gb.add_edge(static_cast<Vertex>(i), static_cast<Vertex>(a + j));
    return std::move(gb).build();
}

inline Graph gnp(std::size_t n, double p, Rng& rng) {
    std::bernoulli_distribution coin(p);
    GraphBuilder b(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (coin(rng)) b.add_edge(static_cast<Vertex>(i), static_cast<Vertex>(j));
    return std::move(b).build();
}

/// G(n,p) conditioned on connectivity by rejection sampling. After every 64
/// rejections p is nudged upwards so sparse requests still terminate.
inline Graph gnp_connected(std::size_t n, double p, Rng& rng) {
    for (int attempt = 0;; ++attempt) {
        if (attempt > 0 && attempt % 64 == 0) p = std::min(1.0, p + 0.05);
        Graph g = gnp(n, p, rng);
        if (is_connected(g)) return g;
    }
}

/// Random bipartite graph on sides of size a and b, each cross pair present with probability p.
inline Graph bipartite(std::size_t a, std::size_t b, double p, Rng& rng) {
    std::bernoulli_distribution coin(p);
    GraphBuilder gb(a + b);
    for (std::size_t i = 0; i < a; ++i)
        for (std::size_t j = 0; j < b; ++j)
            if (coin(rng)) gb.add_edge(static_cast<Vertex>(i), static_cast<Vertex>(a + j));
    return std::move(gb).build();
}

inline Graph bipartite_connected(std::size_t a, std::size_t b, double p, Rng& rng) {
    for (int attempt = 0;; ++attempt) {
        if (attempt > 0 && attempt % 64 == 0) p = std::min(1.0, p + 0.05);
        Graph g = bipartite(a, b, p, rng);
        if (is_connected(g)) return g;
    }
}

enum class ModuleKind { Cograph, Clique, Independent };

/// Edges of a random cograph on `vertices`, built from a random binary cotree:
/// repeatedly merge two random pieces by union or join.
inline void add_random_cograph(GraphBuilder& b, const std::vector<Vertex>& vertices, Rng& rng, double join_prob = 0.5) {
    std::vector<std::vector<Vertex>> pieces;
    for (Vertex v : vertices) pieces.push_back({v});
    std::bernoulli_distribution join(join_prob);
    while (pieces.size() > 1) {
        std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
        std::size_t i = pick(rng), j = pick(rng);
        while (j == i) j = pick(rng);
        if (join(rng))
            for (Vertex u : pieces[i])
                for (Vertex v : pieces[j]) b.add_edge(u, v);
        auto& dst = pieces[std::min(i, j)];
        auto& src = pieces[std::max(i, j)];
        dst.insert(dst.end(), src.begin(), src.end());
        pieces.erase(pieces.begin() + static_cast<std::ptrdiff_t>(std::max(i, j)));
    }
}

inline Graph random_cograph(std::size_t n, Rng& rng, double join_prob = 0.5) {
    GraphBuilder b(n);
    std::vector<Vertex> all(n);
    std::iota(all.begin(), all.end(), 0);
    add_random_cograph(b, all, rng, join_prob);
    return std::move(b).build();
}

/// Substitutes module i (size sizes[i], consecutive ids) for vertex i of `quotient`.
/// Modular-width is at most max(quotient order, 2).
inline Graph substituted(const Graph& quotient, const std::vector<std::size_t>& sizes, ModuleKind kind, Rng& rng) {
    if (sizes.size() != quotient.order()) throw PreconditionError("one module size per quotient vertex");
    std::vector<std::vector<Vertex>> mods;
    std::size_t n = 0;
    for (std::size_t s : sizes) {
        if (s == 0) throw PreconditionError("module sizes must be positive");
        std::vector<Vertex> m(s);
        std::iota(m.begin(), m.end(), static_cast<Vertex>(n));
        n += s;
        mods.push_back(std::move(m));
    }
    GraphBuilder b(n);
    for (auto [i, j] : quotient.edges())
        for (Vertex u : mods[static_cast<std::size_t>(i)])
            for (Vertex v : mods[static_cast<std::size_t>(j)]) b.add_edge(u, v);
    for (const auto& m : mods) {
        switch (kind) {
            case ModuleKind::Cograph: add_random_cograph(b, m, rng); break;
            case ModuleKind::Clique:
                for (std::size_t a = 0; a < m.size(); ++a)
                    for (std::size_t c = a + 1; c < m.size(); ++c) b.add_edge(m[a], m[c]);
                break;
            case ModuleKind::Independent: break;
        }
    }
    return std::move(b).build();
}

/// Named prime quotients: p4, bull, c5, p5.
inline Graph named_quotient(const std::string& name) {
    if (name == "p4") return path(4);
    if (name == "p5") return path(5);
    if (name == "c5") return cycle(5);
    if (name == "bull") return Graph::from_edges(5, std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 4}});
    throw PreconditionError("unknown quotient '" + name + "' (expected p4, p5, c5 or bull)");
}

}  // namespace drdom::gen
