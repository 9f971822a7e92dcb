#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "fixtures.hpp"
#include "vpd/cli.hpp"
#include "vpd/pipeline.hpp"
#include "vpd/server.hpp"
#include "vpd/snapshot.hpp"

namespace vpd {
namespace {

using nlohmann::json;

class ServerTest : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        dir_ = new fixture::ScratchDir("server");
        fixture::PlantedSpec spec;
        spec.group_size = 40;
        spec.p_intra = 0.15;
        const auto files = fixture::write_dataset(fixture::planted_dataset(21, spec), *dir_ / "in");
        RunConfig c;
        c.posts_path = files.posts.string();
        c.interactions_path = files.interactions.string();
        c.output_dir = (*dir_ / "snap").string();
        c.tau = 1;
        c.k_max = 3;
        write_snapshot(run_pipeline(c, load_inputs(c)), c.output_dir);
        service_ = new ApiService(Snapshot::load(c.output_dir));
    }

    static void TearDownTestSuite() {
        delete service_;
        delete dir_;
    }

    static json body(const ApiResponse& r) { return json::parse(r.body); }

    static ClusterId viewpoint() { return service_->snapshot().selection.viewpoint_clusters.at(0); }

    static std::string drill_path() { return "/api/viewpoints/" + std::to_string(viewpoint()) + "/drill"; }

    static inline fixture::ScratchDir* dir_ = nullptr;
    static inline ApiService* service_ = nullptr;
};

TEST_F(ServerTest, MetaAndSelection) {
    const auto meta = service_->get("/api/meta");
    ASSERT_EQ(meta.status, 200);
    EXPECT_EQ(body(meta).at("available_k"), json::array({2, 3}));
    EXPECT_EQ(body(meta).at("drill_enabled"), true);
    const auto sel = body(service_->get("/api/selection"));
    EXPECT_EQ(sel.at("verdict"), "viewpoints_found");
}

TEST_F(ServerTest, SweepMatchesCsv) {
    const auto j = body(service_->get("/api/sweep"));
    const auto& rows = service_->snapshot().sweep;
    ASSERT_EQ(j.at("rows").size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(j.at("rows")[i], to_json(rows[i]));
    EXPECT_EQ(j.at("rows")[0].at("conductance"), j.at("rows")[1].at("conductance"));
}

TEST_F(ServerTest, PartitionsAndUnknownK) {
    const auto p = service_->get("/api/partition/3");
    ASSERT_EQ(p.status, 200);
    EXPECT_EQ(body(p).at("k"), 3);
    EXPECT_EQ(service_->get("/api/partition/9").status, 404);
    EXPECT_EQ(service_->get("/api/partition/abc").status, 404);
    EXPECT_EQ(service_->get("/api/nothing").status, 404);
}

TEST_F(ServerTest, ViewpointTerms) {
    const std::string path = "/api/viewpoints/" + std::to_string(viewpoint()) + "/terms";
    const auto j = body(service_->get(path, {{"m", "2"}}));
    EXPECT_EQ(j.at("terms").size(), 2u);
    EXPECT_EQ(service_->get(path, {{"m", "0"}}).status, 422);
    EXPECT_EQ(service_->get("/api/viewpoints/7/terms").status, 404);
}

TEST_F(ServerTest, GraphSample) {
    const auto j = body(service_->get("/api/graph/sample", {{"max_nodes", "10"}, {"k", "2"}}));
    EXPECT_EQ(j.at("nodes").size(), 10u);
    std::set<std::string> ids;
    for (const auto& n : j.at("nodes")) ids.insert(n.at("id").get<std::string>());
    for (const auto& e : j.at("edges")) {
        EXPECT_TRUE(ids.count(e.at("u").get<std::string>()));
        EXPECT_TRUE(ids.count(e.at("v").get<std::string>()));
    }
    EXPECT_EQ(service_->get("/api/graph/sample", {{"max_nodes", "-1"}}).status, 422);
    EXPECT_EQ(service_->get("/api/graph/sample", {{"k", "8"}}).status, 404);
}

TEST_F(ServerTest, DrillValidationAndErrors) {
    EXPECT_EQ(service_->post(drill_path(), R"({"terms": []})").status, 422);
    EXPECT_EQ(service_->post(drill_path(), "not json").status, 422);
    EXPECT_EQ(service_->post(drill_path(), R"({"terms": ["#greenwave"], "m": 0})").status, 422);
    EXPECT_EQ(service_->post(drill_path(), R"({"terms": [3]})").status, 422);
    EXPECT_EQ(service_->post("/api/viewpoints/9/drill", R"({"terms": ["x"]})").status, 404);
    // every text of a viewpoint carries one of these filler words or a marker
    const auto all = service_->post(
        drill_path(),
        R"({"terms": ["#greenwave", "#stayput", "river", "future", "people", "today", "debate", "country", "money"]})");
    EXPECT_EQ(all.status, 409) << all.body;
}

TEST_F(ServerTest, DrillMatchesCli) {
    const std::string term = viewpoint() == service_->snapshot().selection.viewpoint_clusters.at(0) &&
                                     service_->snapshot().viewpoint_terms.at(viewpoint()).terms.at(0).term ==
                                         "#stayput"
                                 ? "#stayput"
                                 : "#greenwave";
    const auto api = service_->post(drill_path(), json{{"terms", {term}}, {"m", 4}}.dump());
    ASSERT_EQ(api.status, 200) << api.body;
    std::ostringstream out, err;
    const int code = run_cli({"drill", "--snapshot", (*dir_ / "snap").string(), "--viewpoint",
                              std::to_string(viewpoint()), "--terms", term, "--m", "4", "--json"},
                             out, err);
    ASSERT_EQ(code, kExitOk) << err.str();
    EXPECT_EQ(body(api), json::parse(out.str()));
    EXPECT_GE(body(api).at("terms").size(), 1u);
    EXPECT_LE(body(api).at("terms").size(), 4u);
    EXPECT_EQ(body(api).at("query_terms"), json::array({term}));
}

TEST_F(ServerTest, HttpRoundTrip) {
    ApiServer server(*service_, {true, ""});
    const int port = server.bind("127.0.0.1", 0);
    ASSERT_GT(port, 0);
    std::thread t([&] { server.listen(); });
    httplib::Client client("127.0.0.1", port);
    for (int i = 0; i < 100 && !server.running(); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));

    auto sweep = client.Get("/api/sweep");
    ASSERT_TRUE(sweep);
    EXPECT_EQ(sweep->status, 200);
    EXPECT_EQ(sweep->get_header_value("Access-Control-Allow-Origin"), "*");
    EXPECT_EQ(json::parse(sweep->body), body(service_->get("/api/sweep")));

    auto sample = client.Get("/api/graph/sample?max_nodes=5");
    ASSERT_TRUE(sample);
    EXPECT_EQ(json::parse(sample->body).at("nodes").size(), 5u);

    auto bad = client.Post(drill_path(), R"({"terms": []})", "application/json");
    ASSERT_TRUE(bad);
    EXPECT_EQ(bad->status, 422);

    auto missing = client.Get("/api/partition/42");
    ASSERT_TRUE(missing);
    EXPECT_EQ(missing->status, 404);

    server.stop();
    t.join();
}

}  // namespace
}  // namespace vpd
