#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "vpd/error.hpp"
#include "vpd/graph_builder.hpp"

namespace vpd {
namespace {

InteractionRecord rec(const std::string& s, const std::string& p, const std::string& r,
                      InteractionKind kind = InteractionKind::other) {
    return {s, p, r, kind, true};
}

TEST(IngestPosts, ReadsWellFormedLines) {
    std::istringstream in(R"({"post_id": "p1", "author": "u1", "text": "hello"}
{"post_id": "p2", "author": "u2", "text": ""}
{"post_id": "p3", "author": "u1", "text": "again"}
)");
    PostCollection posts = ingest_posts(in);
    EXPECT_EQ(posts.size(), 3u);
    ASSERT_NE(posts.find("p2"), nullptr);
    EXPECT_EQ(posts.find("p2")->text, "");
}

TEST(IngestPosts, DuplicateWithSameContentIsIdempotent) {
    std::istringstream in(R"({"post_id": "p1", "author": "u1", "text": "x"}
{"post_id": "p1", "author": "u1", "text": "x"}
)");
    PostCollection posts = ingest_posts(in);
    EXPECT_EQ(posts.size(), 1u);
    EXPECT_EQ(posts.duplicates, 1u);
}

TEST(IngestPosts, MissingPostIdReportsLine) {
    std::istringstream in(R"({"post_id": "p1", "author": "u1", "text": "x"}
{"author": "u1", "text": "y"}
)");
    try {
        ingest_posts(in);
        FAIL() << "expected InputError";
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
}

TEST(IngestPosts, SkipModeCountsBadLines) {
    std::istringstream in("{\"post_id\": \"p1\", \"author\": \"u1\", \"text\": \"x\"}\nnot json\n"
                          "{\"post_id\": \"p1\", \"author\": \"u1\", \"text\": \"changed\"}\n");
    PostCollection posts = ingest_posts(in, {OnMalformed::skip});
    EXPECT_EQ(posts.size(), 1u);
    ASSERT_EQ(posts.errors.size(), 2u);
    EXPECT_EQ(posts.errors[0].line, 2u);
    EXPECT_EQ(posts.errors[1].line, 3u);
}

TEST(IngestInteractions, AcceptsDropsAndFlags) {
    std::istringstream posts_in(R"({"post_id": "p1", "author": "u2", "text": "x"})");
    PostCollection posts = ingest_posts(posts_in);
    std::istringstream in(R"({"sender": "u1", "post_id": "p1", "receiver": "u2", "kind": "retweet"}
{"sender": "u1", "post_id": "p1", "receiver": "u1"}
{"sender": "u3", "post_id": "missing", "receiver": "u2"}
)");
    InteractionSet set = ingest_interactions(in, {}, &posts);
    ASSERT_EQ(set.records.size(), 2u);
    EXPECT_EQ(set.records[0].kind, InteractionKind::retweet);
    EXPECT_TRUE(set.records[0].known_post);
    EXPECT_EQ(set.records[1].kind, InteractionKind::other);
    EXPECT_FALSE(set.records[1].known_post);
    EXPECT_EQ(set.self_interactions_dropped, 1u);
    EXPECT_EQ(set.unknown_post_records, 1u);
}

TEST(IngestInteractions, MalformedLineAborts) {
    std::istringstream in(R"({"sender": "u1", "post_id": "p1"})");
    EXPECT_THROW(ingest_interactions(in), InputError);
}

TEST(BuildGraph, ThresholdKeepsOnlyQualifyingPairs) {
    InteractionGraph g = build_graph({rec("u1", "p1", "u2"), rec("u1", "p2", "u2"), rec("u3", "p3", "u4")},
                                     {2, {}});
    EXPECT_EQ(g.users(), (std::vector<UserId>{"u1", "u2"}));
    EXPECT_EQ(g.weight("u1", "u2"), 2);
    EXPECT_EQ(g.weight("u3", "u4"), 0);
    EXPECT_EQ(g.excluded_users(), (std::vector<UserId>{"u3", "u4"}));
}

TEST(BuildGraph, DirectionsPool) {
    InteractionGraph g = build_graph({rec("u1", "p1", "u2"), rec("u2", "p2", "u1")}, {2, {}});
    EXPECT_EQ(g.weight("u1", "u2"), 2);
    EXPECT_EQ(g.weight("u2", "u1"), 2);
}

TEST(BuildGraph, TauOneKeepsEveryPair) {
    InteractionGraph g = build_graph({rec("a", "p", "b"), rec("c", "p", "d"), rec("a", "p", "c")}, {1, {}});
    EXPECT_EQ(g.graph().num_edges(), 3u);
    EXPECT_EQ(g.graph().num_nodes(), 4u);
}

TEST(BuildGraph, KindFilter) {
    std::vector<InteractionRecord> recs{rec("a", "p", "b", InteractionKind::retweet),
                                        rec("a", "p", "b", InteractionKind::like),
                                        rec("c", "p", "d", InteractionKind::retweet),
                                        rec("c", "p", "d", InteractionKind::retweet)};
    InteractionGraph g = build_graph(recs, {2, {InteractionKind::retweet}});
    EXPECT_EQ(g.users(), (std::vector<UserId>{"c", "d"}));
    EXPECT_EQ(g.excluded_users(), (std::vector<UserId>{"a", "b"}));
}

TEST(BuildGraph, EmptyInputIsEmptyGraph) {
    InteractionGraph g = build_graph({}, {2, {}});
    EXPECT_EQ(g.graph().num_nodes(), 0u);
    EXPECT_EQ(graph_stats(g.graph()), GraphStats{});
}

TEST(BuildGraph, RejectsTauBelowOne) { EXPECT_THROW(build_graph({}, {0, {}}), ParameterError); }

TEST(GraphStats, PathOfFour) {
    std::vector<Edge> e{{0, 1, 1}, {1, 2, 1}, {2, 3, 1}};
    GraphStats s = graph_stats(Graph::from_edges(4, e));
    EXPECT_EQ(s.nodes, 4u);
    EXPECT_EQ(s.edges, 3u);
    EXPECT_EQ(s.total_volume, 6);
    EXPECT_EQ(s.component_sizes, (std::vector<std::size_t>{4}));
}

TEST(GraphStats, TwoTriangles) {
    std::vector<Edge> e{{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}};
    EXPECT_EQ(graph_stats(Graph::from_edges(6, e)).component_sizes, (std::vector<std::size_t>{3, 3}));
}

// Random interaction multisets: the built graph honours threshold, symmetry,
// pruning and the handshake identity.
TEST(BuildGraph, InvariantsOnRandomInteractions) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const int users = 3 + static_cast<int>(rng() % 12);
        const int tau = 1 + static_cast<int>(rng() % 3);
        std::vector<InteractionRecord> recs;
        for (int i = 0, n = static_cast<int>(rng() % 80); i < n; ++i) {
            recs.push_back(rec("u" + std::to_string(rng() % users), "p", "u" + std::to_string(rng() % users)));
        }
        InteractionGraph g = build_graph(recs, {tau, {}});
        Weight degree_sum = 0;
        for (NodeId u = 0; u < g.graph().num_nodes(); ++u) {
            EXPECT_GE(g.graph().weighted_degree(u), 1);
            degree_sum += g.graph().weighted_degree(u);
            for (const Neighbor& nb : g.graph().neighbors(u)) {
                EXPECT_GE(nb.w, tau);
                EXPECT_NE(nb.node, u);
                EXPECT_EQ(g.graph().edge_weight(nb.node, u), nb.w);
            }
        }
        EXPECT_EQ(degree_sum, 2 * g.graph().total_edge_weight());
    }
}

TEST(GraphJson, RoundTrips) {
    InteractionGraph g = build_graph({rec("a", "p", "b"), rec("b", "p", "c"), rec("a", "q", "b")}, {1, {}});
    std::stringstream buf;
    write_graph_json(buf, g);
    InteractionGraph back = read_graph_json(buf);
    EXPECT_EQ(back.users(), g.users());
    EXPECT_EQ(back.graph().edges().size(), g.graph().edges().size());
    EXPECT_EQ(back.weight("a", "b"), 2);
    EXPECT_EQ(back.min_endorsements(), 1);
}

TEST(GraphMl, EscapesIdsAndCarriesWeights) {
    InteractionGraph g = build_graph({rec("a&b", "p", "c")}, {1, {}});
    std::ostringstream out;
    write_graphml(out, g);
    EXPECT_NE(out.str().find("a&amp;b"), std::string::npos);
    EXPECT_NE(out.str().find("<data key=\"weight\">1</data>"), std::string::npos);
}

}  // namespace
}  // namespace vpd
