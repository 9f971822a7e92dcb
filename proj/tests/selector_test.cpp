#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "vpd/error.hpp"
#include "vpd/selector.hpp"

namespace vpd {
namespace {

Graph make(NodeId n, std::vector<Edge> edges) { return Graph::from_edges(n, edges); }

Graph path4() { return make(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}}); }

std::vector<NodeId> v(std::initializer_list<NodeId> xs) { return xs; }

Graph two_five_cliques() {
    std::vector<Edge> e;
    for (NodeId c = 0; c < 2; ++c) {
        for (NodeId a = 0; a < 5; ++a) {
            for (NodeId b = a + 1; b < 5; ++b) e.push_back({c * 5 + a, c * 5 + b, 1});
        }
    }
    e.push_back({4, 5, 1});
    return make(10, e);
}

ProfileLevel level(ClusterId k, std::vector<double> conductances) {
    ProfileLevel l;
    l.k = k;
    for (ClusterId c = 0; c < conductances.size(); ++c) {
        l.clusters.push_back({c, 1, 1, 0, conductances[c]});
    }
    return l;
}

TEST(Volume, Examples) {
    const Graph g = path4();
    EXPECT_EQ(volume(g, v({0, 1})), 3);
    EXPECT_EQ(volume(g, v({0, 1, 2, 3})), 2 * g.total_edge_weight());
    EXPECT_EQ(volume(g, v({})), 0);
    EXPECT_EQ(cut_weight(g, v({0, 1})), 1);
}

TEST(Conductance, Examples) {
    const Graph tri = make(6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}});
    EXPECT_EQ(conductance(tri, v({0, 1, 2})), 0.0);
    EXPECT_DOUBLE_EQ(conductance(path4(), v({0, 1})), 1.0 / 3.0);
    const Graph star = make(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}});
    EXPECT_EQ(conductance(star, v({1})), 1.0);
}

TEST(Conductance, Errors) {
    EXPECT_THROW(conductance(path4(), v({})), ParameterError);
    EXPECT_THROW(conductance(path4(), v({0, 1, 2, 3})), ParameterError);
}

TEST(Conductance, ZeroVolumeIsZero) {
    const Graph g = make(3, {{0, 1, 1}});
    EXPECT_EQ(conductance(g, v({2})), 0.0);
}

TEST(Conductance, MatchesEnumerationOnRandomGraphs) {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 60; ++t) {
        const std::uint32_t n = 2 + static_cast<std::uint32_t>(rng() % 9);
        const auto el = oracle::random_graph(rng, n, 0.4, 6);
        const Graph g = el.graph();
        for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
            std::vector<NodeId> cluster;
            for (NodeId u = 0; u < n; ++u) {
                if ((mask >> u) & 1U) cluster.push_back(u);
            }
            const double c = conductance(g, cluster);
            EXPECT_NEAR(c, oracle::enumerate_conductance(el, mask), 1e-12);
            EXPECT_GE(c, 0.0);
            EXPECT_LE(c, 1.0);
        }
    }
}

TEST(ClusterQualities, EqualConductanceAtTwo) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 50; ++t) {
        const auto el = oracle::random_graph(rng, 3 + static_cast<std::uint32_t>(rng() % 40), 0.2, 5);
        const Graph g = el.graph();
        Partition p{2, std::vector<ClusterId>(g.num_nodes())};
        for (auto& a : p.assignment) a = rng() % 2;
        p.assignment[0] = 0;
        p.assignment[1] = 1;
        const auto q = cluster_qualities(g, p);
        ASSERT_EQ(q.size(), 2u);
        EXPECT_EQ(q[0].conductance, q[1].conductance);
        EXPECT_EQ(q[0].cut_weight, q[1].cut_weight);
        EXPECT_EQ(q[0].size + q[1].size, g.num_nodes());
    }
}

TEST(Profile, TwoCliquesAtTwo) {
    const ConductanceProfile prof = profile(two_five_cliques(), 2, PartitionParams{});
    ASSERT_EQ(prof.levels.size(), 1u);
    const ProfileLevel* l = prof.at(2);
    ASSERT_NE(l, nullptr);
    ASSERT_EQ(l->clusters.size(), 2u);
    for (const auto& q : l->clusters) {
        EXPECT_DOUBLE_EQ(q.conductance, 1.0 / 21.0);
        EXPECT_EQ(q.volume, 21);
    }
    EXPECT_EQ(prof.at(3), nullptr);
}

TEST(Profile, K6AtTwo) {
    std::vector<Edge> e;
    for (NodeId a = 0; a < 6; ++a) {
        for (NodeId b = a + 1; b < 6; ++b) e.push_back({a, b, 1});
    }
    const ConductanceProfile prof = profile(make(6, e), 3, PartitionParams{});
    ASSERT_EQ(prof.levels.size(), 2u);
    for (const auto& q : prof.at(2)->clusters) EXPECT_DOUBLE_EQ(q.conductance, 0.6);
    EXPECT_EQ(prof.at(3)->clusters.size(), 3u);
}

TEST(Profile, MatchesSequentialRuns) {
    std::mt19937_64 rng(2);
    const Graph g = oracle::random_connected_graph(rng, 120, 0.05, 3).graph();
    PartitionParams params;
    params.seed = 77;
    const ConductanceProfile prof = profile(g, 5, params);
    for (ClusterId k = 2; k <= 5; ++k) {
        params.k = k;
        EXPECT_EQ(prof.at(k)->result.partition, kway_partition(g, params).partition);
        EXPECT_EQ(prof.at(k)->clusters, cluster_qualities(g, prof.at(k)->result.partition));
    }
}

TEST(SelectViewpoints, LowConductanceAtTwo) {
    ConductanceProfile prof{{level(2, {0.04, 0.04}), level(3, {0.25, 0.45, 0.80})}};
    const ViewpointSelection s = select_viewpoints(prof, 0.10);
    EXPECT_EQ(s.chosen_k, 2u);
    EXPECT_EQ(s.viewpoint_clusters, (std::vector<ClusterId>{0, 1}));
    EXPECT_TRUE(s.noisy_clusters.empty());
    EXPECT_EQ(s.verdict, Verdict::viewpoints_found);
    EXPECT_FALSE(s.forced);
}

TEST(SelectViewpoints, TieGoesToSmallerKUnlessForced) {
    ConductanceProfile prof{{level(2, {0.05, 0.05}), level(3, {0.03, 0.60, 0.07})}};
    const ViewpointSelection s = select_viewpoints(prof, 0.10);
    EXPECT_EQ(s.chosen_k, 2u);

    const ViewpointSelection f = select_viewpoints(prof, 0.10, 3);
    EXPECT_EQ(f.chosen_k, 3u);
    EXPECT_TRUE(f.forced);
    EXPECT_EQ(f.viewpoint_clusters, (std::vector<ClusterId>{0, 2}));
    EXPECT_EQ(f.noisy_clusters, (std::vector<ClusterId>{1}));
    EXPECT_TRUE(f.is_viewpoint(2));
    EXPECT_FALSE(f.is_viewpoint(1));
}

TEST(SelectViewpoints, MoreClustersUnderThresholdWins) {
    ConductanceProfile prof{{level(2, {0.2, 0.2}), level(3, {0.05, 0.5, 0.08}), level(4, {0.01, 0.02, 0.09, 0.5})}};
    EXPECT_EQ(select_viewpoints(prof, 0.10).chosen_k, 4u);
}

TEST(SelectViewpoints, NothingUnderThreshold) {
    ConductanceProfile prof{{level(2, {0.3, 0.3}), level(3, {0.25, 0.45, 0.80})}};
    const ViewpointSelection s = select_viewpoints(prof, 0.10);
    EXPECT_EQ(s.verdict, Verdict::no_clear_viewpoints);
}

TEST(SelectViewpoints, SingleViewpointIsNotClear) {
    ConductanceProfile prof{{level(2, {0.3, 0.3}), level(3, {0.05, 0.45, 0.80})}};
    EXPECT_EQ(select_viewpoints(prof, 0.10).verdict, Verdict::no_clear_viewpoints);
}

TEST(SelectViewpoints, Errors) {
    ConductanceProfile prof{{level(2, {0.3, 0.3})}};
    EXPECT_THROW(select_viewpoints(prof, 0.0), ParameterError);
    EXPECT_THROW(select_viewpoints(prof, 1.0), ParameterError);
    EXPECT_THROW(select_viewpoints(ConductanceProfile{}, 0.1), ParameterError);
    EXPECT_THROW(select_viewpoints(prof, 0.1, 5), NotFoundError);
}

TEST(SelectViewpoints, PureFunction) {
    ConductanceProfile prof{{level(2, {0.04, 0.04}), level(3, {0.02, 0.05, 0.9})}};
    EXPECT_EQ(select_viewpoints(prof, 0.1), select_viewpoints(prof, 0.1));
}

TEST(Verdict, RoundTrip) {
    for (Verdict x : {Verdict::viewpoints_found, Verdict::no_clear_viewpoints}) {
        EXPECT_EQ(parse_verdict(to_string(x)), x);
    }
    EXPECT_EQ(to_string(Verdict::no_clear_viewpoints), "no_clear_viewpoints");
}

}  // namespace
}  // namespace vpd
