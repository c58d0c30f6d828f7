#include <gtest/gtest.h>

#include <drdom/colored.hpp>
#include <drdom/generators.hpp>
#include <drdom/ilp.hpp>
#include <drdom/kernel.hpp>
#include <drdom/oracle.hpp>

#include "support/naive.hpp"

using namespace drdom;

namespace {

Graph k55() { return gen::complete_bipartite(5, 5); }

}  // namespace

// ---------------------------------------------------------------- kernel

TEST(Kernel, K55ToK22) {
    auto k = kernelize_nd(k55(), 1, 1);
    EXPECT_EQ(k.graph, gen::complete_bipartite(2, 2));
    EXPECT_EQ(k.original_id, (std::vector<Vertex>{0, 1, 5, 6}));
    EXPECT_EQ(k.report.bound, 4u);
    EXPECT_EQ(k.report.nd, 2u);
    EXPECT_EQ(k.report.original_n, 10u);
    EXPECT_EQ(k.report.kernel_m, 4u);
    EXPECT_EQ(naive::min_size(k.graph, 1, 1), naive::min_size(k55(), 1, 1));
}

TEST(Kernel, SmallClassesUnchanged) {
    auto k = kernelize_nd(gen::path(6), 1, 1);
    EXPECT_EQ(k.graph, gen::path(6));
    auto k2 = kernelize_nd(k55(), 3, 1);
    EXPECT_EQ(k2.graph, k55());
}

TEST(Kernel, AnswerPreservedWithOffsetAndBounded) {
    naive::Rng rng(301);
    for (int trial = 0; trial < 160; ++trial) {
        Graph g = trial % 4 == 3 ? gen::star(3 + trial % 10) : naive::blown_up(2 + trial % 4, 5, rng);
        if (g.order() > 14) continue;
        const int d = 1 + trial % 3, r = 1 + (trial / 3) % 3;
        auto k = kernelize_nd(g, d, r);
        EXPECT_LE(k.graph.order(), std::min<std::size_t>(g.order(), 2 * static_cast<std::size_t>(d) * k.report.nd));
        // equal minima <=> equal decisions for every budget, since both answers are monotone in k
        const auto full = naive::min_size(g, d, r), pruned = naive::min_size(k.graph, d, r);
        ASSERT_EQ(full, pruned + k.budget_offset) << to_edge_list(g) << " d=" << d << " r=" << r;
        if (k.budget_offset == 0) {
            EXPECT_EQ(full, pruned);
        }
    }
}

TEST(Kernel, ForcedClassBreaksPlainPruning) {
    // every leaf of K_{1,9} has one neighbour, so with d = 2 all leaves are forced
    Graph s = gen::star(10);
    auto k = kernelize_nd(s, 2, 1);
    EXPECT_EQ(k.graph, gen::star(5));
    EXPECT_EQ(naive::min_size(s, 2, 1), 9u);
    EXPECT_EQ(naive::min_size(k.graph, 2, 1), 4u);
    EXPECT_EQ(k.budget_offset, 5u);
    EXPECT_EQ(k.report.forced_removed, 5u);
}

TEST(Kernel, ClassBoundHoldsOutsideForcedClasses) {
    naive::Rng rng(306);
    for (int trial = 0; trial < 80; ++trial) {
        Graph g = trial % 2 ? naive::blown_up(2 + trial % 3, 4, rng) : naive::random_connected(4 + trial % 8, 0.3, rng);
        if (g.order() > 12) continue;
        const int d = 1 + trial % 3, r = 1 + (trial / 2) % 2;
        auto tp = type_partition(g);
        bool found = false;
        for (const auto& s : naive::all_min(g, d, r)) {
            bool ok = true;
            for (const auto& c : tp.classes) {
                std::size_t in = 0;
                for (Vertex v : c) in += std::binary_search(s.begin(), s.end(), v);
                if (in > static_cast<std::size_t>(2 * d - 1) && ball(g, c.front(), r).size() >= static_cast<std::size_t>(d)) ok = false;
            }
            found |= ok;
        }
        EXPECT_TRUE(found) << to_edge_list(g) << " d=" << d << " r=" << r;
    }
}

TEST(Kernel, ReportJson) {
    auto j = to_json(kernelize_nd(k55(), 1, 1).report);
    EXPECT_EQ(j["bound"], 4);
    EXPECT_EQ(j["kernel"]["n"], 4);
}

// ---------------------------------------------------------------- colored

TEST(Colored, PrimeGraphKeepsItselfAllWhite) {
    auto ci = reduce_to_colored(gen::path(4), 1, 9);
    EXPECT_EQ(ci.h.order(), 4u);
    EXPECT_EQ(ci.h.size(), 3u);
    EXPECT_EQ(ci.colors, "WWWW");
    EXPECT_EQ(ci.budget, 4);
}

TEST(Colored, K55) {
    auto ci = reduce_to_colored(k55(), 1, 2);
    EXPECT_EQ(ci.h, gen::complete(2));
    EXPECT_EQ(ci.colors, "BB");
    EXPECT_EQ(ci.budget, 2);
    auto s = solve_colored_bruteforce(ci);
    ASSERT_TRUE(s);
    EXPECT_EQ(s->size(), 2u);
    EXPECT_EQ(to_json(ci).dump(), R"({"h_edges":[[0,1]],"colors":"BB","budget":2})");
}

TEST(Colored, K55SquaredIsTrivialYes) {
    auto ci = reduce_to_colored(k55(), 2, 1);
    auto s = solve_colored_bruteforce(ci);
    ASSERT_TRUE(s);
    EXPECT_EQ(s->size(), 1u);
}

TEST(Colored, BruteForceExamples) {
    ColoredInstance all_w{gen::complete(4), "WWWW", 1, {}};
    EXPECT_EQ(solve_colored_bruteforce(all_w)->size(), 1u);
    ColoredInstance bb{gen::complete(2), "BB", 2, {}};
    EXPECT_EQ(solve_colored_bruteforce(bb)->size(), 2u);
    bb.budget = 1;
    EXPECT_FALSE(solve_colored_bruteforce(bb));
    ColoredInstance p3{gen::path(3), "WBW", 1, {}};
    EXPECT_FALSE(solve_colored_bruteforce(p3));
    p3.budget = 2;
    EXPECT_TRUE(solve_colored_bruteforce(p3));
}

TEST(Colored, RejectsDisconnectedAndDegenerate) {
    EXPECT_THROW(reduce_to_colored(Graph(3), 1, 1), PreconditionError);
    EXPECT_THROW(reduce_to_colored(Graph(1), 1, 1), PreconditionError);
    EXPECT_THROW(reduce_to_colored(gen::path(3), 0, 1), PreconditionError);
}

TEST(Colored, EquivalenceAndSize) {
    naive::Rng rng(302);
    for (int trial = 0; trial < 150; ++trial) {
        Graph g = trial % 2 ? naive::blown_up(2 + trial % 4, 3, rng) : naive::random_connected(2 + trial % 11, 0.2, rng);
        if (g.order() > 12 || g.order() < 2) continue;
        const int r = 1 + trial % 3;
        const std::size_t opt = naive::min_size(g, 1, r);
        Graph power = graph_power(g, r);
        const std::size_t mw = modular_decomposition(power).width();
        for (int k = 1; k <= static_cast<int>(g.order()); ++k) {
            auto ci = reduce_to_colored(g, r, k);
            ASSERT_LE(ci.h.order(), mw);
            ASSERT_LE(ci.budget, static_cast<int>(ci.h.order()));
            auto got = naive::colored_min(ci.h, ci.colors, ci.budget);
            auto lib = solve_colored_bruteforce(ci);
            ASSERT_EQ(got.has_value(), lib.has_value());
            if (lib) {
                EXPECT_EQ(*got, lib->size());
                EXPECT_TRUE(is_dr_dominating(g, 1, r, expand_colored(power, ci, *lib)));
            }
            ASSERT_EQ(got.has_value(), opt <= static_cast<std::size_t>(k)) << to_edge_list(g) << " r=" << r << " k=" << k;
        }
    }
}

// ---------------------------------------------------------------- structure

TEST(StructureCheck, Examples) {
    auto a = solution_structure_check(k55());
    ASSERT_TRUE(a.witness);
    EXPECT_EQ(a.minimum_size, 2u);
    EXPECT_LT((*a.witness)[0], 5);
    EXPECT_GE((*a.witness)[1], 5);
    auto b = solution_structure_check(gen::path(4));
    ASSERT_TRUE(b.witness);
    EXPECT_EQ(b.minimum_size, 2u);
    auto c = solution_structure_check(gen::star(5));
    ASSERT_TRUE(c.witness);
    EXPECT_EQ(*c.witness, VertexSet{0});
}

TEST(StructureCheck, RandomConnectedGraphsHaveWitness) {
    naive::Rng rng(303);
    for (int trial = 0; trial < 60; ++trial) {
        Graph g = trial % 2 ? naive::blown_up(2 + trial % 4, 3, rng) : naive::random_connected(3 + trial % 9, 0.3, rng);
        if (g.order() > 12) continue;
        EXPECT_TRUE(solution_structure_check(g).witness) << to_edge_list(g);
    }
}

// ---------------------------------------------------------------- ILP

TEST(Ilp, K55SingleModule) {
    auto ilp = build_ilp(k55(), 1, 10);
    EXPECT_EQ(ilp.module_count(), 1u);
    EXPECT_EQ(ilp.cost[0][1], 2);
    auto s = solve_ilp_enumeration(ilp);
    ASSERT_TRUE(s);
    EXPECT_EQ(s->objective, 2);
    EXPECT_EQ(expand_assignment(ilp, s->tau).size(), 2u);
}

TEST(Ilp, PrimeGraphUsesUnitCosts) {
    auto ilp = build_ilp(gen::path(4), 1, 2);
    EXPECT_EQ(ilp.module_count(), 4u);
    for (const auto& c : ilp.cost) EXPECT_EQ(c[1], 1);
    EXPECT_TRUE(solve_ilp_enumeration(ilp));
    EXPECT_FALSE(solve_ilp_enumeration(build_ilp(gen::path(4), 1, 1)));
}

TEST(Ilp, RowAndColumnCounts) {
    naive::Rng rng(304);
    for (int trial = 0; trial < 20; ++trial) {
        Graph g = naive::random_connected(8, 0.3, rng);
        const int d = 1 + trial % 3;
        auto ilp = build_ilp(g, d, 8);
        EXPECT_EQ(ilp.variable_count(), ilp.module_count() * static_cast<std::size_t>(d));
        EXPECT_EQ(ilp.rows.size(), 1 + 2 * ilp.module_count());
        EXPECT_EQ(ilp.module_count(), itp_number(g).itp);
    }
}

TEST(Ilp, EmptyAssignmentNeverFeasible) {
    auto ilp = build_ilp(gen::path(5), 2, 5);
    EXPECT_FALSE(ilp_feasible(ilp, IlpChoice(ilp.module_count(), 0)));
}

TEST(Ilp, LpText) {
    auto lp = to_lp(build_ilp(gen::path(4), 2, 3));
    for (const char* section : {"Minimize", "Subject To", "Binaries", "End", "budget:", "demand_4:", "choose_4:", "x_4_2"})
        EXPECT_NE(lp.find(section), std::string::npos) << section;
}

TEST(Ilp, SoundnessOnEveryFeasibleAssignment) {
    naive::Rng rng(305);
    for (int trial = 0; trial < 60; ++trial) {
        Graph g = trial % 2 ? naive::blown_up(2 + trial % 4, 3, rng) : naive::random_connected(3 + trial % 8, 0.3, rng);
        if (g.order() > 12) continue;
        const int d = 1 + trial % 3;
        auto ilp = build_ilp(g, d, static_cast<std::int64_t>(g.order()));
        const std::size_t opt = naive::min_size(g, d, 1);
        std::size_t seen = 0;
        for_each_feasible(ilp, [&](const IlpChoice& tau) {
            EXPECT_TRUE(ilp_feasible(ilp, tau));
            auto s = expand_assignment(ilp, tau);
            EXPECT_EQ(static_cast<std::int64_t>(s.size()), ilp_objective(ilp, tau));
            EXPECT_TRUE(is_dr_dominating(g, d, 1, s));
            EXPECT_GE(s.size(), opt);
            return ++seen < 2000;
        });
        EXPECT_GT(seen, 0u);
    }
}

TEST(Ilp, EnumerationCap) {
    auto ilp = build_ilp(gen::path(8), 3, 8);
    EXPECT_THROW(solve_ilp_enumeration(ilp, {100.0, Deadline::never()}), CapExceeded);
}
