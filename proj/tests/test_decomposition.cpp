#include <gtest/gtest.h>

#include <algorithm>

#include <drdom/decomposition.hpp>
#include <drdom/generators.hpp>
#include <drdom/graph.hpp>

#include "support/naive.hpp"

using namespace drdom;

namespace {

Graph k55() { return gen::complete_bipartite(5, 5); }

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
    return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

/// Checks the tree against the naive module and primality tests.
void expect_sound_tree(const Graph& g, const ParseTree& t) {
    auto a = naive::adjacency(g);
    for (int id : t.post_order()) {
        const auto& node = t.node(id);
        if (node.kind == NodeKind::Leaf) continue;
        ASSERT_GE(node.children.size(), 2u);
        for (int c : node.children) {
            // a module of the parent's induced subgraph that is also a module of g,
            // since the parent is itself a module of g
            ASSERT_TRUE(naive::is_module(a, t.module(c)));
            if (node.kind != NodeKind::Prime) {
                ASSERT_NE(t.node(c).kind, node.kind);
            }
        }
        if (node.kind == NodeKind::Prime && node.quotient.order() <= 12) {
            ASSERT_TRUE(naive::is_prime(node.quotient));
        }
    }
}

}  // namespace

TEST(Decomposition, K2IsJoin) {
    auto t = modular_decomposition(gen::complete(2));
    EXPECT_EQ(t.node(t.root()).kind, NodeKind::Join);
    EXPECT_EQ(t.node(t.root()).children.size(), 2u);
    EXPECT_EQ(t.width(), 2u);
}

TEST(Decomposition, P4IsPrime) {
    Graph p4 = gen::path(4);
    ASSERT_TRUE(naive::is_prime(p4));
    auto t = modular_decomposition(p4);
    const auto& root = t.node(t.root());
    EXPECT_EQ(root.kind, NodeKind::Prime);
    EXPECT_EQ(root.children.size(), 4u);
    EXPECT_EQ(t.width(), 4u);
    // the quotient is P4 with vertex i standing for child i
    std::vector<Vertex> leaf;
    for (int c : root.children) leaf.push_back(t.node(c).vertex);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (i != j) {
                EXPECT_EQ(root.quotient.adjacent(static_cast<Vertex>(i), static_cast<Vertex>(j)), p4.adjacent(leaf[i], leaf[j]));
            }
}

TEST(Decomposition, K55IsJoinOfTwoUnions) {
    auto t = modular_decomposition(k55());
    const auto& root = t.node(t.root());
    ASSERT_EQ(root.kind, NodeKind::Join);
    ASSERT_EQ(root.children.size(), 2u);
    for (int c : root.children) {
        EXPECT_EQ(t.node(c).kind, NodeKind::Union);
        EXPECT_EQ(t.node(c).children.size(), 5u);
    }
    EXPECT_EQ(t.width(), 2u);
    EXPECT_TRUE(validate_parse_tree(k55(), t).empty());
}

TEST(Decomposition, SingleVertex) {
    auto t = modular_decomposition(Graph(1));
    EXPECT_EQ(t.node(t.root()).kind, NodeKind::Leaf);
    EXPECT_EQ(t.width(), 2u);
}

TEST(ValidateParseTree, UnionClaimOnK55) {
    ParseTree t;
    std::vector<int> left, right;
    for (Vertex v = 0; v < 5; ++v) left.push_back(t.add_leaf(v));
    for (Vertex v = 5; v < 10; ++v) right.push_back(t.add_leaf(v));
    int a = t.add_internal(NodeKind::Union, left);
    int b = t.add_internal(NodeKind::Union, right);
    t.finalize(t.add_internal(NodeKind::Union, {a, b}));
    auto v = validate_parse_tree(k55(), t);
    EXPECT_TRUE(mentions(v, "kind mismatch")) << v.size();
}

TEST(ValidateParseTree, P4WithFalseModule) {
    Graph p4 = gen::path(4);
    ParseTree t;
    int l0 = t.add_leaf(0), l1 = t.add_leaf(1), l2 = t.add_leaf(2), l3 = t.add_leaf(3);
    int j = t.add_internal(NodeKind::Join, {l0, l1});
    t.finalize(t.add_internal(NodeKind::Prime, {j, l2, l3}, gen::path(3)));
    auto v = validate_parse_tree(p4, t);
    EXPECT_TRUE(mentions(v, "is not a module")) << (v.empty() ? "" : v.front());
}

TEST(ValidateParseTree, MissingAndRepeatedLeaves) {
    ParseTree t;
    int a = t.add_leaf(0), b = t.add_leaf(0);
    t.finalize(t.add_internal(NodeKind::Union, {a, b}));
    EXPECT_TRUE(mentions(validate_parse_tree(Graph(2), t), "appears in"));
}

TEST(ValidateParseTree, WrongStoredQuotient) {
    Graph p4 = gen::path(4);
    ParseTree t;
    std::vector<int> kids;
    for (Vertex v = 0; v < 4; ++v) kids.push_back(t.add_leaf(v));
    t.finalize(t.add_internal(NodeKind::Prime, kids, gen::cycle(4)));
    EXPECT_TRUE(mentions(validate_parse_tree(p4, t), "stored quotient differs"));
}

TEST(ValidateParseTree, NestedSameKind) {
    Graph e3(3);
    ParseTree t;
    int a = t.add_leaf(0), b = t.add_leaf(1), c = t.add_leaf(2);
    int u = t.add_internal(NodeKind::Union, {a, b});
    t.finalize(t.add_internal(NodeKind::Union, {u, c}));
    EXPECT_TRUE(mentions(validate_parse_tree(e3, t), "same degenerate kind"));
}

TEST(TypePartition, Examples) {
    auto kn = type_partition(gen::complete(6));
    EXPECT_EQ(kn.count(), 1u);
    EXPECT_EQ(kn.kinds[0], ClassKind::Clique);
    auto kb = type_partition(k55());
    ASSERT_EQ(kb.count(), 2u);
    EXPECT_EQ(kb.kinds[0], ClassKind::Independent);
    EXPECT_EQ(kb.kinds[1], ClassKind::Independent);
    EXPECT_EQ(type_partition(gen::path(4)).count(), 4u);
}

TEST(Itp, Examples) {
    auto r = itp_number(k55());
    EXPECT_EQ(r.itp, 1u);
    ASSERT_EQ(r.trace.size(), 3u);  // K5,5 -> K2 -> K1
    EXPECT_EQ(r.trace[1].order(), 2u);
    auto p = itp_number(gen::path(4));
    EXPECT_EQ(p.itp, 4u);
    EXPECT_EQ(p.trace.size(), 1u);
    EXPECT_EQ(itp_number(Graph(1)).itp, 1u);
}

TEST(StructuralParams, Examples) {
    auto a = structural_params(k55());
    EXPECT_EQ(a.mw, 2u);
    EXPECT_EQ(a.itp, 1u);
    EXPECT_EQ(a.nd, 2u);
    auto b = structural_params(gen::path(4));
    EXPECT_EQ(b.mw, 4u);
    EXPECT_EQ(b.itp, 4u);
    EXPECT_EQ(b.nd, 4u);
    auto c = structural_params(Graph(1));
    EXPECT_EQ(c.mw, 2u);
    EXPECT_EQ(c.itp, 1u);
    EXPECT_EQ(c.nd, 1u);
}

TEST(DecompositionProperty, RandomGraphsAreSoundAndValid) {
    naive::Rng rng(101);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + trial % 12;
        Graph g = trial % 3 == 0 ? naive::blown_up(1 + trial % 5, 3, rng) : naive::random_graph(n, 0.2 + 0.05 * (trial % 12), rng);
        auto t = modular_decomposition(g);
        auto v = validate_parse_tree(g, t);
        ASSERT_TRUE(v.empty()) << v.front() << "\n" << to_edge_list(g);
        expect_sound_tree(g, t);
    }
}

TEST(DecompositionProperty, LargerGraphsValidate) {
    gen::Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        Graph g = trial % 2 ? gen::gnp(60, 0.1, rng)
                            : gen::substituted(gen::named_quotient(trial % 4 ? "bull" : "c5"), {8, 12, 5, 9, 7},
                                               gen::ModuleKind::Cograph, rng);
        auto t = modular_decomposition(g);
        auto v = validate_parse_tree(g, t);
        ASSERT_TRUE(v.empty()) << v.front();
        if (trial % 2 == 0) {
            EXPECT_LE(t.width(), 5u);
        }
    }
}

TEST(DecompositionProperty, CographsHaveNoPrimeNode) {
    gen::Rng rng(8);
    for (int trial = 0; trial < 40; ++trial) {
        Graph g = gen::random_cograph(2 + trial % 11, rng);
        ASSERT_TRUE(naive::is_cograph(g));
        auto t = modular_decomposition(g);
        for (const auto& node : t.nodes()) EXPECT_NE(node.kind, NodeKind::Prime);
        EXPECT_EQ(itp_number(g).itp, 1u);
    }
}

TEST(TypePartitionProperty, MatchesNaiveTwinClasses) {
    naive::Rng rng(103);
    for (int trial = 0; trial < 200; ++trial) {
        Graph g = trial % 2 ? naive::blown_up(2 + trial % 5, 4, rng) : naive::random_graph(1 + trial % 12, 0.4, rng);
        auto tp = type_partition(g);
        auto expect = naive::twin_classes(g);
        ASSERT_EQ(tp.classes, expect);
        auto a = naive::adjacency(g);
        for (std::size_t i = 0; i < tp.count(); ++i) {
            const auto& c = tp.classes[i];
            if (c.size() < 2) continue;
            EXPECT_EQ(tp.kinds[i] == ClassKind::Clique, a[c[0]][c[1]] == 1);
        }
        EXPECT_EQ(itp_number(g).itp, naive::itp(g));
    }
}

TEST(StructuralParamsProperty, ChainHolds) {
    naive::Rng rng(104);
    for (int trial = 0; trial < 200; ++trial) {
        Graph g = trial % 2 ? naive::blown_up(2 + trial % 6, 3, rng) : naive::random_connected(2 + trial % 11, 0.3, rng);
        StructuralParams p;
        ASSERT_NO_THROW(p = structural_params(g));
        EXPECT_LE(p.mw, std::max<std::size_t>(p.itp, 2));
        EXPECT_LE(p.itp, p.nd);
        EXPECT_LE(p.nd, g.order());
    }
}

TEST(PowerMonotonicity, WidthNdItpDoNotGrow) {
    naive::Rng rng(105);
    for (int trial = 0; trial < 100; ++trial) {
        Graph g = naive::random_connected(4 + trial % 9, 0.15, rng);
        auto base = structural_params(g);
        auto tp = type_partition(g);
        for (int r = 2; r <= 3; ++r) {
            Graph p = graph_power(g, r);
            auto pp = structural_params(p);
            EXPECT_LE(pp.mw, base.mw);
            EXPECT_LE(pp.nd, base.nd);
            EXPECT_LE(pp.itp, base.itp);
            auto a = naive::adjacency(p);
            for (const auto& c : tp.classes) EXPECT_TRUE(naive::is_module(a, c));
        }
    }
}

TEST(ParseTreeJson, Shape) {
    auto j = to_json(modular_decomposition(gen::path(4)));
    EXPECT_EQ(j["kind"], "prime");
    EXPECT_EQ(j["quotient_edges"].size(), 3u);
    ASSERT_EQ(j["children"].size(), 4u);
    EXPECT_EQ(j["children"][0]["kind"], "leaf");
    EXPECT_TRUE(j["children"][0].contains("vertex"));
    auto k = to_json(modular_decomposition(k55()));
    EXPECT_EQ(k["kind"], "join");
    EXPECT_FALSE(k.contains("quotient_edges"));
}
