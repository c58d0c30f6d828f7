#include <gtest/gtest.h>

#include <drdom/generators.hpp>
#include <drdom/oracle.hpp>
#include <drdom/solver.hpp>

#include "support/naive.hpp"

using namespace drdom;

namespace {

/// Table of an independent set of size s: c(0) = 0, c(t >= 1) = s.
CostTable independent_table(std::size_t s, int d) {
    CostTable c;
    c.module_size = s;
    c.c.assign(static_cast<std::size_t>(d + 1), Cost{static_cast<std::int64_t>(s)});
    c.c[0] = 0;
    c.choice.assign(static_cast<std::size_t>(d + 1), {});
    return c;
}

std::int64_t root_value(const DpResult& dp, int t) { return dp.root_table().c[static_cast<std::size_t>(t)].value(); }

}  // namespace

TEST(CostTables, LeafTable) {
    auto l = leaf_table(3);
    EXPECT_EQ(l.c[0], Cost{0});
    for (int t = 1; t <= 3; ++t) EXPECT_EQ(l.c[static_cast<std::size_t>(t)], Cost{1});
}

TEST(CostTables, PaperOnJoinOfIndependentFives) {
    auto a = independent_table(5, 1), b = independent_table(5, 1);
    auto t = cost_table_paper(gen::complete(2), {&a, &b}, 1);
    EXPECT_EQ(t.c[1], Cost{5});
    EXPECT_EQ(t.choice[1][0].demand + t.choice[1][1].demand, 1);
    auto lit = single_demand_exhaustive(gen::complete(2), {a.c, b.c}, 1);
    EXPECT_EQ(lit[1], Cost{5});
}

TEST(CostTables, PaperOnTwoLeaves) {
    auto a = leaf_table(1), b = leaf_table(1);
    auto t = cost_table_paper(gen::complete(2), {&a, &b}, 1);
    EXPECT_EQ(t.c[1], Cost{1});
    EXPECT_EQ(t.choice[1][0], (ChildChoice{0, 0}));
    EXPECT_EQ(t.choice[1][1], (ChildChoice{1, 1}));
}

TEST(CostTables, ExtendedOnJoinOfIndependentFives) {
    auto a = independent_table(5, 1), b = independent_table(5, 1);
    auto t = cost_table_extended(gen::complete(2), {&a, &b}, 1);
    EXPECT_EQ(t.c[1], Cost{2});
    EXPECT_EQ(t.choice[1][0], (ChildChoice{0, 1}));
    EXPECT_EQ(t.choice[1][1], (ChildChoice{0, 1}));
}

TEST(CostTables, CliqueAndIndependentModules) {
    for (std::size_t n = 1; n <= 8; ++n)
        for (int d = 1; d <= 4; ++d) {
            auto kc = compute_tables(gen::complete(n), d);
            auto ki = compute_tables(Graph(n), d);
            for (int t = 1; t <= d; ++t) {
                EXPECT_EQ(root_value(kc, t), std::min<std::int64_t>(t, static_cast<std::int64_t>(n)));
                EXPECT_EQ(root_value(ki, t), static_cast<std::int64_t>(n));
            }
        }
}

TEST(CostTables, PaperMatchesSingleDemandExhaustive) {
    naive::Rng rng(201);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t l = 2 + trial % 5;
        const int d = 1 + trial % 3;
        Graph h = naive::random_graph(l, 0.5, rng);
        std::vector<CostTable> kids;
        for (std::size_t i = 0; i < l; ++i) {
            CostTable c;
            c.module_size = 1 + rng() % 6;
            c.c.push_back(0);
            std::int64_t v = 0;
            for (int t = 1; t <= d; ++t) {
                v = std::min<std::int64_t>(static_cast<std::int64_t>(c.module_size), v + 1 + static_cast<std::int64_t>(rng() % 2));
                c.c.push_back(v);
            }
            c.choice.assign(static_cast<std::size_t>(d + 1), {});
            kids.push_back(c);
        }
        std::vector<const CostTable*> ptrs;
        std::vector<std::vector<Cost>> raw;
        for (auto& k : kids) {
            ptrs.push_back(&k);
            raw.push_back(k.c);
        }
        auto fast = cost_table_paper(h, ptrs, d);
        auto lit = single_demand_exhaustive(h, raw, d);
        auto ext = cost_table_extended(h, ptrs, d);
        for (int t = 0; t <= d; ++t) {
            ASSERT_EQ(fast.c[static_cast<std::size_t>(t)], lit[static_cast<std::size_t>(t)]) << "trial " << trial << " t=" << t;
            EXPECT_LE(ext.c[static_cast<std::size_t>(t)], fast.c[static_cast<std::size_t>(t)]);
        }
    }
}

TEST(CostTables, LiteralIterationCount) {
    std::uint64_t it = 0;
    auto a = leaf_table(2);
    single_demand_exhaustive(gen::path(3), {a.c, a.c, a.c}, 2, &it);
    EXPECT_EQ(it, 8u + 27u);  // (t+1)^l for t = 1, 2
}

TEST(CostTables, EveryNodeMatchesBruteForce) {
    naive::Rng rng(202);
    for (int trial = 0; trial < 120; ++trial) {
        Graph g = trial % 2 ? naive::blown_up(2 + trial % 4, 3, rng) : naive::random_graph(2 + trial % 9, 0.4, rng);
        if (g.order() > 12) continue;
        const int d = 1 + trial % 3;
        auto ext = compute_tables(g, d, {DpVariant::Extended, true});
        auto pap = compute_tables(g, d, {DpVariant::Paper, true});
        for (int id : ext.tree.post_order()) {
            auto mod = ext.tree.module(id);
            auto expect = naive::cost_table(induced_subgraph(g, mod), d);
            const auto& te = ext.tables[static_cast<std::size_t>(id)];
            const auto& tp = pap.tables[static_cast<std::size_t>(id)];
            for (int t = 0; t <= d; ++t) {
                const auto ts = static_cast<std::size_t>(t);
                ASSERT_EQ(te.c[ts].value(), expect[ts]) << to_edge_list(g) << " node " << id << " t=" << t;
                EXPECT_GE(tp.c[ts], te.c[ts]);
                EXPECT_LE(te.c[ts].value(), static_cast<std::int64_t>(mod.size()));
                if (t > 0) {
                    EXPECT_LE(te.c[ts - 1], te.c[ts]);
                    EXPECT_LE(tp.c[ts - 1], tp.c[ts]);
                }
            }
            // every entry reconstructs to a set of its own size that works inside the module
            for (int t = 1; t <= d; ++t) {
                auto w = reconstruct(ext, id, t);
                Graph sub = induced_subgraph(g, mod);
                VertexSet local;
                for (Vertex v : w) local.push_back(static_cast<Vertex>(std::lower_bound(mod.begin(), mod.end(), v) - mod.begin()));
                EXPECT_TRUE(is_dr_dominating(sub, t, 1, local));
            }
        }
    }
}

TEST(Solver, Examples) {
    Graph k55 = gen::complete_bipartite(5, 5);
    EXPECT_EQ(solve_d1_modular(k55, 1, DpVariant::Extended).size(), 2u);
    EXPECT_EQ(solve_d1_modular(k55, 1, DpVariant::Paper).size(), 5u);
    EXPECT_EQ(solve_d1_modular(gen::star(5), 1, DpVariant::Extended).size(), 1u);
    EXPECT_EQ(solve_d1_modular(gen::star(5), 1, DpVariant::Paper).size(), 1u);
    EXPECT_EQ(solve_dr(gen::path(5), 1, 2).size(), 1u);
}

TEST(Solver, RadiusAtLeastDiameterGivesD) {
    naive::Rng rng(203);
    for (int trial = 0; trial < 30; ++trial) {
        Graph g = naive::random_connected(5 + trial % 6, 0.2, rng);
        const int d = 1 + trial % 3;
        EXPECT_EQ(solve_dr(g, d, static_cast<int>(g.order()), DpVariant::Extended).size(), static_cast<std::size_t>(d));
    }
}

TEST(Solver, RadiusOneEqualsModularSolver) {
    naive::Rng rng(204);
    for (int trial = 0; trial < 30; ++trial) {
        Graph g = naive::random_graph(9, 0.4, rng);
        EXPECT_EQ(solve_dr(g, 2, 1).vertices, solve_d1_modular(g, 2).vertices);
    }
}

TEST(Solver, ExtendedIsExactOnRandomConnectedGraphs) {
    naive::Rng rng(205);
    for (int trial = 0; trial < 150; ++trial) {
        Graph g = trial % 3 == 0 ? naive::blown_up(3 + trial % 3, 3, rng) : naive::random_connected(3 + trial % 10, 0.25, rng);
        if (g.order() > 12) continue;
        const int d = 1 + trial % 3, r = 1 + (trial / 3) % 3;
        auto s = solve_dr(g, d, r);
        ASSERT_EQ(s.size(), naive::min_size(g, d, r)) << to_edge_list(g) << " d=" << d << " r=" << r;
        EXPECT_TRUE(s.valid);
        EXPECT_GE(solve_dr(g, d, r, DpVariant::Paper).size(), s.size());
    }
}

TEST(Solver, DisconnectedInputsSumComponents) {
    naive::Rng rng(206);
    for (int trial = 0; trial < 30; ++trial) {
        Graph g = naive::random_graph(10, 0.15, rng);
        const int d = 1 + trial % 2;
        EXPECT_EQ(solve_dr(g, d, 1).size(), naive::min_size(g, d, 1));
    }
}

TEST(Solver, Deterministic) {
    gen::Rng rng(5);
    Graph g = gen::substituted(gen::path(4), {6, 6, 6, 6}, gen::ModuleKind::Cograph, rng);
    auto a = solve_dr(g, 2, 1), b = solve_dr(g, 2, 1);
    EXPECT_EQ(a.vertices, b.vertices);
}

TEST(Solver, FastPathsAgreeWithGenericSearch) {
    gen::Rng rng(6);
    for (int trial = 0; trial < 40; ++trial) {
        Graph g = gen::random_cograph(3 + trial % 10, rng);
        for (auto v : {DpVariant::Paper, DpVariant::Extended})
            EXPECT_NO_THROW(compute_tables(g, 1 + trial % 3, {v, true}));
    }
}

TEST(Solver, RejectsBadParameters) {
    EXPECT_THROW(solve_dr(gen::path(3), 0, 1), PreconditionError);
    EXPECT_THROW(solve_dr(gen::path(3), 1, 0), PreconditionError);
}

TEST(Solver, TablesJson) {
    DpResult dp;
    solve_dr(gen::complete_bipartite(5, 5), 1, 1, DpVariant::Paper, &dp);
    auto j = tables_to_json(dp);
    EXPECT_EQ(j["variant"], "dp-paper");
    EXPECT_EQ(j["d"], 1);
    EXPECT_FALSE(j["tables"].empty());
    EXPECT_EQ(j["tables"].back()["c"][1], 5);
}
