#include <cstdlib>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "vpd/cli.hpp"
#include "vpd/snapshot.hpp"

namespace vpd {
namespace {

namespace fs = std::filesystem;

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        fixture::PlantedSpec spec;
        spec.group_size = 40;
        spec.p_intra = 0.15;
        files_ = fixture::write_dataset(fixture::planted_dataset(11, spec), dir_ / "in");
    }

    std::vector<std::string> inputs(const std::string& out) const {
        return {"--posts", files_.posts.string(), "--interactions", files_.interactions.string(), "--out",
                (dir_ / out).string(), "--tau", "1"};
    }

    std::vector<std::string> cmd(const std::string& sub, const std::string& out,
                                 std::vector<std::string> extra = {}) const {
        std::vector<std::string> a{sub};
        for (auto& x : inputs(out)) a.push_back(x);
        for (auto& x : extra) a.push_back(x);
        return a;
    }

    fixture::ScratchDir dir_{"cli"};
    fixture::DatasetFiles files_;
};

TEST_F(CliTest, BuildWritesGraphStatsAndManifest) {
    const CliRun r = cli(cmd("build", "b", {"--json", "--topic", "harborvote"}));
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto stats = nlohmann::json::parse(r.out);
    EXPECT_GT(stats.at("graph").at("nodes").get<int>(), 70);
    for (const char* f : {"graph.json", "graph.graphml", "stats.json", "manifest.json"}) {
        EXPECT_TRUE(fs::exists(dir_ / "b" / f)) << f;
    }
    const auto manifest = read_json_file(dir_ / "b" / "manifest.json");
    EXPECT_EQ(manifest.at("command"), "build");
    EXPECT_EQ(manifest.at("config").at("tau"), 1);
    EXPECT_EQ(manifest.at("config").at("topic"), "harborvote");
    EXPECT_EQ(manifest.at("seed"), 1);
}

TEST_F(CliTest, SweepCsvHasEqualConductanceAtTwo) {
    const CliRun r = cli(cmd("sweep", "s", {"--k-max", "3"}));
    ASSERT_EQ(r.code, kExitOk) << r.err;
    std::ifstream in(dir_ / "s" / "sweep.csv");
    const auto rows = read_sweep_csv(in);
    ASSERT_EQ(rows.size(), 5u);
    EXPECT_EQ(rows[0].k, 2u);
    EXPECT_EQ(rows[0].quality.conductance, rows[1].quality.conductance);
    EXPECT_TRUE(fs::exists(dir_ / "s" / "partitions" / "k3.json"));
}

TEST_F(CliTest, SelectVerdictAndExitCodes) {
    CliRun r = cli(cmd("select", "sel", {"--json"}));
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out).at("verdict"), "viewpoints_found");
    EXPECT_TRUE(fs::exists(dir_ / "sel" / "selection.json"));

    r = cli(cmd("select", "sel2", {"--delta", "0.001"}));
    EXPECT_EQ(r.code, kExitNoClearViewpoints);

    r = cli(cmd("select", "sel3", {"--force-k", "3", "--json"}));
    EXPECT_EQ(nlohmann::json::parse(r.out).at("chosen_k"), 3);
    EXPECT_EQ(nlohmann::json::parse(r.out).at("forced"), true);
}

TEST_F(CliTest, DescribeLedByPlantedVocabulary) {
    const CliRun r = cli(cmd("describe", "d", {"--json", "--m", "3"}));
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto all = nlohmann::json::parse(r.out);
    ASSERT_EQ(all.size(), 2u);
    std::set<std::string> captains;
    for (const auto& v : all) {
        EXPECT_LE(v.at("terms").size(), 3u);
        captains.insert(v.at("terms").at(0).at("term").get<std::string>());
        EXPECT_TRUE(fs::exists(dir_ / "d" / "terms" / ("viewpoint_" + v.at("viewpoint").dump() + ".json")));
    }
    EXPECT_EQ(captains, (std::set<std::string>{"#greenwave", "#stayput"}));
}

TEST_F(CliTest, DrillFromInputsAndSnapshotAgree) {
    ASSERT_EQ(cli(cmd("export", "x")).code, kExitOk);
    const auto sel = read_json_file(dir_ / "x" / "selection.json");
    const std::string v = sel.at("viewpoints").at(0).dump();
    const CliRun live = cli(cmd("drill", "dl", {"--viewpoint", v, "--terms", "#greenwave", "--json"}));
    const CliRun snap = cli({"drill", "--snapshot", (dir_ / "x").string(), "--viewpoint", v, "--terms", "#greenwave",
                          "--json"});
    ASSERT_EQ(snap.code, live.code) << snap.err << live.err;
    if (live.code == kExitOk) {
        EXPECT_EQ(nlohmann::json::parse(live.out), nlohmann::json::parse(snap.out));
    }
}

TEST_F(CliTest, EvalReport) {
    const CliRun r = cli(cmd("eval", "e", {"--truth", files_.truth.string(), "--json"}));
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto report = nlohmann::json::parse(r.out);
    EXPECT_GE(report.at("purity").get<double>(), 0.95);
    EXPECT_GE(report.at("nmi").get<double>(), 0.8);
    EXPECT_TRUE(report.contains("n_unlabeled"));
    EXPECT_TRUE(fs::exists(dir_ / "e" / "report.json"));
}

TEST_F(CliTest, ErrorsMapToExitCodes) {
    EXPECT_EQ(cli({}).code, kExitUsage);
    EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
    EXPECT_EQ(cli({"sweep", "--k-max", "x"}).code, kExitUsage);
    EXPECT_EQ(cli({"build", "--interactions", (dir_ / "missing.jsonl").string(), "--out", (dir_ / "m").string()})
                  .code,
              kExitInputError);
    EXPECT_EQ(cli(cmd("sweep", "t", {"--epsilon=-1"})).code, kExitParameterError);
    EXPECT_EQ(cli(cmd("select", "t", {"--delta", "2"})).code, kExitParameterError);
    EXPECT_EQ(cli(cmd("describe", "t", {"--viewpoint", "9"})).code, kExitParameterError);
    EXPECT_EQ(cli(cmd("build", "t", {"--kinds", "retweet,poke"})).code, kExitParameterError);
    EXPECT_EQ(cli({"serve", "--snapshot", (dir_ / "none").string(), "--bind", "127.0.0.1:0"}).code,
              kExitInputError);
    EXPECT_EQ(cli({"build", "--help"}).code, kExitOk);
}

TEST_F(CliTest, MalformedLinesAbortOrSkip) {
    {
        std::ofstream f(files_.interactions, std::ios::app);
        f << "{not json\n";
    }
    EXPECT_EQ(cli(cmd("build", "mal")).code, kExitInputError);
    EXPECT_EQ(cli(cmd("build", "mal", {"--skip-malformed"})).code, kExitOk);
}

TEST_F(CliTest, EnvironmentOverridesFlags) {
    ::setenv("VPD_K_MAX", "3", 1);
    const CliRun r = cli(cmd("sweep", "env"));
    ::unsetenv("VPD_K_MAX");
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(read_json_file(dir_ / "env" / "manifest.json").at("config").at("k_max"), 3);
}

}  // namespace
}  // namespace vpd
