#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "support.hpp"

using namespace gqsb;
using namespace gqsb::testing;

namespace {

std::set<std::vector<Side>> as_set(const std::vector<Bipartition>& parts) {
    std::set<std::vector<Side>> out;
    for (const auto& b : parts) out.insert(b.sides());
    return out;
}

std::vector<Side> sides_with_v1(std::size_t n, std::initializer_list<NodeId> v1) {
    return Bipartition::from_v1(n, v1).sides();
}

// A network with three positive clusters: positive components
// {0,1,2,3}, {4,5,6}, {7}; node 0 has positive neighbours 1,2, an intra
// negative neighbour 3 and negative neighbours 4,7 across.
SignedGraph three_cluster_network() {
    return SignedGraph::from_edge_list(8, {{0, 1, 1.0},
                                           {0, 2, 1.0},
                                           {0, 3, -1.0},
                                           {0, 4, -1.0},
                                           {0, 7, -1.0},
                                           {1, 3, 1.0},
                                           {2, 5, -1.0},
                                           {4, 5, 1.0},
                                           {5, 6, 1.0},
                                           {6, 7, -1.0},
                                           {3, 7, -1.0}});
}

}  // namespace

TEST(FromEdgeList, CanonicalizesTriangles) {
    const auto g = SignedGraph::from_edge_list(3, {{2, 1, -3.0}, {0, 1, 1.0}, {2, 0, -3.0}});
    EXPECT_EQ(g, mixed_triangle());
    EXPECT_EQ(g.edges().front(), (Edge{0, 1, 1.0}));
    EXPECT_EQ(g.weight(2, 0), -3.0);
    EXPECT_EQ(g.weight(0, 2), -3.0);

    const auto a = antagonistic_triangle().adjacency();
    EXPECT_TRUE(a.isApprox(a.transpose()));
    EXPECT_EQ(a(0, 1), -1.0);
    EXPECT_EQ(a(1, 2), -3.0);
    EXPECT_EQ(a(0, 0), 0.0);
}

TEST(FromEdgeList, RejectsMalformedInput) {
    auto code_of = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        ADD_FAILURE() << "no error";
        return ErrorCode::IoError;
    };
    EXPECT_EQ(code_of([] { SignedGraph::from_edge_list(2, {{0, 1, 5.0}, {1, 0, 5.0}}); }),
              ErrorCode::DuplicateEdge);
    EXPECT_EQ(code_of([] { SignedGraph::from_edge_list(2, {{1, 1, 5.0}}); }), ErrorCode::SelfLoop);
    EXPECT_EQ(code_of([] { SignedGraph::from_edge_list(2, {{0, 2, 5.0}}); }), ErrorCode::BadIndex);
    EXPECT_EQ(code_of([] { SignedGraph::from_edge_list(2, {{0, 1, 0.0}}); }), ErrorCode::ZeroWeight);
}

TEST(SubgraphBySign, SplitsEdges) {
    const auto pos2 = subgraph_by_sign(mixed_triangle(), Sign::Positive);
    ASSERT_EQ(pos2.edge_count(), 1U);
    EXPECT_EQ(pos2.edges()[0], (Edge{0, 1, 1.0}));
    EXPECT_EQ(pos2.node_count(), 3U);
    EXPECT_EQ(subgraph_by_sign(antagonistic_triangle(), Sign::Positive).edge_count(), 0U);

    const auto path = SignedGraph::from_edge_list(3, {{0, 1, 2.0}, {1, 2, 1.0}});
    EXPECT_EQ(subgraph_by_sign(path, Sign::Negative).edge_count(), 0U);
}

TEST(ConnectedComponents, PositiveSubgraphs) {
    using Comps = std::vector<std::vector<NodeId>>;
    EXPECT_EQ(connected_components(subgraph_by_sign(mixed_triangle(), Sign::Positive)), (Comps{{0, 1}, {2}}));
    EXPECT_EQ(connected_components(subgraph_by_sign(antagonistic_triangle(), Sign::Positive)),
              (Comps{{0}, {1}, {2}}));
    const auto k3 = SignedGraph::from_edge_list(3, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}});
    EXPECT_EQ(connected_components(k3).size(), 1U);
    EXPECT_EQ(positive_component_count(mixed_triangle()), 2U);
    EXPECT_EQ(positive_component_count(antagonistic_triangle()), 3U);
}

TEST(SpanningForest, NegativeForestAndCycles) {
    const auto single = SignedGraph::from_edge_list(3, {{0, 1, -1.0}});
    auto dec = spanning_forest(single);
    EXPECT_EQ(dec.forest_edges, (std::vector<Edge>{{0, 1, -1.0}}));
    EXPECT_TRUE(dec.cycle_edges.empty());

    dec = spanning_forest(SignedGraph::from_edge_list(3, {{0, 1, -1.0}, {0, 2, -1.0}, {1, 2, -1.0}}));
    EXPECT_EQ(dec.forest_edges.size(), 2U);
    EXPECT_EQ(dec.cycle_edges.size(), 1U);

    dec = spanning_forest(SignedGraph::from_edge_list(4, {}));
    EXPECT_TRUE(dec.forest_edges.empty());
    EXPECT_TRUE(dec.negative_edges.empty());
}

TEST(SpanningForest, ForestPropertyOnRandomGraphs) {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + trial % 10;
        const auto g = random_signed_graph(rng, n, 0.5, 0.5);
        const auto dec = spanning_forest(g);
        const auto neg = subgraph_by_sign(g, Sign::Negative);
        EXPECT_EQ(dec.forest_edges.size(), n - connected_components(neg).size());
        EXPECT_EQ(dec.positive_edges.size() + dec.negative_edges.size(), g.edge_count());
        EXPECT_EQ(dec.forest_edges.size() + dec.cycle_edges.size(), dec.negative_edges.size());

        // every cycle edge closes a cycle in the forest
        const auto forest = SignedGraph::from_edge_list(n, dec.forest_edges);
        EXPECT_EQ(connected_components(forest).size(), connected_components(neg).size());
        const auto labels = component_labels(forest);
        for (const Edge& e : dec.cycle_edges) EXPECT_EQ(labels[e.i], labels[e.j]);

        const auto inc = incidence_matrix(g, dec);
        ASSERT_EQ(inc.b.cols(), static_cast<Eigen::Index>(g.edge_count()));
        for (Eigen::Index c = 0; c < inc.b.cols(); ++c) {
            EXPECT_EQ((inc.b.col(c).array() == 1.0).count(), 1);
            EXPECT_EQ((inc.b.col(c).array() == -1.0).count(), 1);
            EXPECT_EQ(inc.b.col(c).sum(), 0.0);
        }
    }
}

TEST(IncidenceMatrix, ColumnBlocksAndOrientation) {
    const auto one = SignedGraph::from_edge_list(3, {{0, 1, -1.0}});
    auto inc = incidence_matrix(one, spanning_forest(one));
    ASSERT_EQ(inc.b.cols(), 1);
    EXPECT_EQ(inc.b.col(0), Eigen::Vector3d(1.0, -1.0, 0.0));
    EXPECT_EQ(inc.forest_columns, 1U);

    // z-domain of the antagonistic triangle: single negative edge (0,1), two positive edges
    const auto gz = SignedGraph::from_edge_list(3, {{0, 1, -1.0}, {0, 2, 3.0}, {1, 2, 3.0}});
    inc = incidence_matrix(gz, spanning_forest(gz));
    EXPECT_EQ(inc.forest_columns, 1U);
    EXPECT_EQ(inc.cycle_columns, 0U);
    EXPECT_EQ(inc.positive_columns, 2U);
    EXPECT_EQ(Eigen::Vector3d(inc.forest_block().col(0)), Eigen::Vector3d(1.0, -1.0, 0.0));

    const auto empty = SignedGraph::from_edge_list(3, {});
    inc = incidence_matrix(empty, spanning_forest(empty));
    EXPECT_EQ(inc.b.rows(), 3);
    EXPECT_EQ(inc.b.cols(), 0);
}

TEST(StructuralBalance, Examples) {
    const auto sb = is_structurally_balanced(mixed_triangle());
    ASSERT_TRUE(sb);
    EXPECT_EQ(sb->members(Side::V1), (std::vector<NodeId>{0, 1}));
    EXPECT_EQ(sb->members(Side::V2), (std::vector<NodeId>{2}));

    EXPECT_FALSE(is_structurally_balanced(antagonistic_triangle()));

    const auto k3 = SignedGraph::from_edge_list(3, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}});
    EXPECT_FALSE(is_structurally_balanced(k3));

    // two disjoint antagonistic pairs: balanced in two different ways, not unique
    const auto pairs = SignedGraph::from_edge_list(4, {{0, 1, -1.0}, {2, 3, -1.0}});
    EXPECT_FALSE(is_structurally_balanced(pairs));

    // negative path: unique bipartition {0,2} | {1}
    const auto path = SignedGraph::from_edge_list(3, {{0, 1, -1.0}, {1, 2, -1.0}});
    ASSERT_TRUE(is_structurally_balanced(path));
    EXPECT_EQ(is_structurally_balanced(path)->sides(), sides_with_v1(3, {0, 2}));
}

TEST(StructuralBalance, AgreesWithBruteForce) {
    Rng rng(7);
    int balanced = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t n = 2 + trial % 9;
        // sparse graphs and near-balanced sign patterns so both outcomes occur
        SignedGraph g = trial % 2 ? random_signed_graph(rng, n, 0.35, 0.5)
                                  : random_gqsb(rng, n, 0.4, 0.0, false).graph;
        const auto valid = brute_force_bipartitions(n, [&](const Bipartition& b) { return sb_valid(g, b); });
        const auto got = is_structurally_balanced(g);
        ASSERT_EQ(got.has_value(), valid.size() == 1) << "trial " << trial;
        if (got) {
            EXPECT_EQ(*got, valid.front());
            ++balanced;
        }
    }
    EXPECT_GT(balanced, 20);
}

TEST(GqsbEnumeration, Examples) {
    auto parts = enumerate_gqsb_bipartitions(antagonistic_triangle());
    EXPECT_EQ(as_set(parts), (std::set<std::vector<Side>>{
                                 sides_with_v1(3, {0}), sides_with_v1(3, {0, 2}), sides_with_v1(3, {0, 1})}));
    parts = enumerate_gqsb_bipartitions(mixed_triangle());
    ASSERT_EQ(parts.size(), 1U);
    EXPECT_EQ(parts[0].sides(), sides_with_v1(3, {0, 1}));

    const auto g1 = three_cluster_network();
    EXPECT_EQ(positive_component_count(g1), 3U);
    parts = enumerate_gqsb_bipartitions(g1);
    EXPECT_EQ(parts.size(), 3U);
    EXPECT_EQ(as_set(parts), (std::set<std::vector<Side>>{sides_with_v1(8, {0, 1, 2, 3}),
                                                          sides_with_v1(8, {0, 1, 2, 3, 7}),
                                                          sides_with_v1(8, {0, 1, 2, 3, 4, 5, 6})}));

    const auto connected_positive = SignedGraph::from_edge_list(3, {{0, 1, 1.0}, {1, 2, 2.0}, {0, 2, -1.0}});
    EXPECT_TRUE(enumerate_gqsb_bipartitions(connected_positive).empty());
}

TEST(GqsbEnumeration, CountMatchesBruteForce) {
    Rng rng(3);
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + trial % 11;
        const auto g = random_signed_graph(rng, n, 0.4, 0.6);
        const std::size_t p = positive_component_count(g);
        const auto parts = enumerate_gqsb_bipartitions(g);
        const auto brute = brute_force_bipartitions(n, [&](const Bipartition& b) { return gqsb_valid(g, b); });
        EXPECT_EQ(parts.size(), brute.size());
        EXPECT_EQ(as_set(parts), as_set(brute));
        if (p >= 2) {
            EXPECT_EQ(parts.size(), (std::size_t{1} << (p - 1)) - 1);
            EXPECT_EQ(gqsb_bipartition_count(p), parts.size());
            ++checked;
        }
        for (const auto& b : parts) {
            EXPECT_TRUE(validate_gqsb(g, b));
            // mirror-free
            EXPECT_EQ(std::count(parts.begin(), parts.end(), b.swapped()), 0);
        }
    }
    EXPECT_GT(checked, 200);
}

TEST(GqsbEnumeration, TooManyComponents) {
    const auto g = SignedGraph::from_edge_list(30, {});
    EXPECT_THROW(enumerate_gqsb_bipartitions(g), Error);
    EXPECT_EQ(gqsb_bipartition_count(30), (std::uint64_t{1} << 29) - 1);
    EXPECT_FALSE(gqsb_bipartition_count(65).has_value());
}

TEST(ValidateGqsb, Examples) {
    EXPECT_TRUE(validate_gqsb(antagonistic_triangle(), Bipartition::from_v1(3, {0, 1})));
    EXPECT_FALSE(validate_gqsb(mixed_triangle(), Bipartition::from_v1(3, {0, 2})));
    const auto apart = SignedGraph::from_edge_list(4, {{0, 1, 1.0}, {2, 3, -1.0}});
    const auto b = Bipartition::from_v1(4, {0, 1});
    EXPECT_TRUE(validate_gqsb(apart, b));
    EXPECT_FALSE(is_connected(apart));
}

TEST(Qsb, Examples) {
    const auto g = SignedGraph::from_edge_list(
        4, {{0, 1, 10.0}, {1, 2, 10.0}, {0, 2, -1.0}, {0, 3, -5.0}, {1, 3, -5.0}, {2, 3, -5.0}});
    const auto q = is_qsb(g);
    ASSERT_TRUE(q);
    EXPECT_EQ(q->sides(), sides_with_v1(4, {0, 1, 2}));
    EXPECT_FALSE(is_structurally_balanced(g));
    EXPECT_EQ(classify(g), BalanceClass::QuasiStructurallyBalanced);

    EXPECT_FALSE(is_qsb(antagonistic_triangle()));
    EXPECT_EQ(classify(antagonistic_triangle()), BalanceClass::GeneralizedQSB);

    ASSERT_TRUE(is_qsb(mixed_triangle()));
    EXPECT_EQ(is_qsb(mixed_triangle())->sides(), sides_with_v1(3, {0, 1}));
    EXPECT_EQ(classify(mixed_triangle()), BalanceClass::StructurallyBalanced);

    // SB with three positive components is still QSB
    const auto path = SignedGraph::from_edge_list(3, {{0, 1, -1.0}, {1, 2, -1.0}});
    EXPECT_EQ(positive_component_count(path), 3U);
    ASSERT_TRUE(is_qsb(path));
    EXPECT_EQ(is_qsb(path)->sides(), sides_with_v1(3, {0, 2}));
}

TEST(Qsb, AgreesWithBruteForceAndInclusionChain) {
    Rng rng(5);
    int qsb_count = 0, sb_count = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t n = 2 + trial % 9;
        SignedGraph g = trial % 3 == 0 ? random_signed_graph(rng, n, 0.4, 0.5)
                                       : random_gqsb(rng, n, 0.45, 0.15, trial % 2 == 0).graph;
        const auto valid = brute_force_bipartitions(n, [&](const Bipartition& b) { return qsb_valid(g, b); });
        const auto got = is_qsb(g);
        ASSERT_EQ(got.has_value(), valid.size() == 1) << "trial " << trial;
        if (got) {
            EXPECT_EQ(*got, valid.front());
            ++qsb_count;
        }
        const auto sb = is_structurally_balanced(g);
        if (sb) {
            ++sb_count;
            ASSERT_TRUE(got) << "SB but not QSB, trial " << trial;
            EXPECT_EQ(*sb, *got);
        }
        if (got) {
            EXPECT_GE(positive_component_count(g), 2U);
        }
        const auto cls = classify(g);
        EXPECT_EQ(cls == BalanceClass::StructurallyBalanced, sb.has_value());
        EXPECT_EQ(cls == BalanceClass::UnbalancedSigned, positive_component_count(g) < 2);
    }
    EXPECT_GT(qsb_count, 40);
    EXPECT_GT(sb_count, 10);
}

TEST(NeighborSets, Examples) {
    const auto b = Bipartition::from_v1(3, {0, 1});
    auto s = neighbor_sets(antagonistic_triangle(), b, 0);
    EXPECT_TRUE(s.coop.empty());
    EXPECT_EQ(s.intra_neg, (std::vector<NodeId>{1}));
    EXPECT_EQ(s.inter_neg, (std::vector<NodeId>{2}));

    s = neighbor_sets(antagonistic_triangle(), b, 2);
    EXPECT_TRUE(s.coop.empty());
    EXPECT_TRUE(s.intra_neg.empty());
    EXPECT_EQ(s.inter_neg, (std::vector<NodeId>{0, 1}));

    const auto g = SignedGraph::from_edge_list(3, {{0, 1, -1.0}});
    s = neighbor_sets(g, Bipartition::from_v1(3, {0}), 2);
    EXPECT_TRUE(s.coop.empty() && s.intra_neg.empty() && s.inter_neg.empty());

    EXPECT_THROW(neighbor_sets(g, Bipartition::from_v1(3, {0}), 3), Error);

    // three-cluster network: N+ = {1,2}, N- = {3}, N^- = {4,7} (0-based)
    s = neighbor_sets(three_cluster_network(), Bipartition::from_v1(8, {0, 1, 2, 3}), 0);
    EXPECT_EQ(s.coop, (std::vector<NodeId>{1, 2}));
    EXPECT_EQ(s.intra_neg, (std::vector<NodeId>{3}));
    EXPECT_EQ(s.inter_neg, (std::vector<NodeId>{4, 7}));
}

TEST(NeighborSets, PartitionTheNeighbourhood) {
    Rng rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const auto inst = random_gqsb(rng, 3 + trial % 8, 0.5, 0.3, false);
        for (NodeId i = 0; i < inst.graph.node_count(); ++i) {
            const auto s = neighbor_sets(inst.graph, inst.partition, i);
            std::vector<NodeId> all = s.coop;
            all.insert(all.end(), s.intra_neg.begin(), s.intra_neg.end());
            all.insert(all.end(), s.inter_neg.begin(), s.inter_neg.end());
            std::sort(all.begin(), all.end());
            EXPECT_EQ(std::adjacent_find(all.begin(), all.end()), all.end());
            EXPECT_EQ(all.size(), inst.graph.neighbors(i).size());
        }
    }
}

TEST(Chromatic, Examples) {
    const auto condensed = condense_positive_components(antagonistic_triangle());
    EXPECT_EQ(condensed.node_count(), 3U);
    EXPECT_EQ(condensed.edge_count(), 3U);
    EXPECT_EQ(chromatic_number(condensed), 3U);

    const auto two = condense_positive_components(mixed_triangle());
    EXPECT_EQ(two.node_count(), 2U);
    EXPECT_EQ(chromatic_number(two), 2U);

    EXPECT_EQ(chromatic_number(SignedGraph::from_edge_list(4, {})), 1U);
    EXPECT_THROW(chromatic_number(SignedGraph::from_edge_list(21, {})), Error);
}

TEST(Chromatic, MatchesExhaustiveSearch) {
    Rng rng(21);
    for (int trial = 0; trial < 120; ++trial) {
        const auto g = random_signed_graph(rng, 2 + trial % 7, 0.5, 1.0);
        EXPECT_EQ(chromatic_number(g), brute_force_chromatic(g)) << "trial " << trial;
    }
}

TEST(InducedBipartition, UnionOfPositiveComponents) {
    const auto g = three_cluster_network();
    EXPECT_EQ(induced_bipartition(g, std::vector<NodeId>{2}).sides(), sides_with_v1(8, {0, 1, 2, 3}));
    EXPECT_EQ(induced_bipartition(g, std::vector<NodeId>{0, 7}).sides(), sides_with_v1(8, {0, 1, 2, 3, 7}));
    EXPECT_THROW(induced_bipartition(g, std::vector<NodeId>{0, 4, 7}), Error);
    EXPECT_THROW(induced_bipartition(g, std::vector<NodeId>{}), Error);
}
