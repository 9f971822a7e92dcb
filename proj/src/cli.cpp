#include "vpd/cli.hpp"

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "vpd/error.hpp"
#include "vpd/metrics.hpp"
#include "vpd/pipeline.hpp"
#include "vpd/server.hpp"
#include "vpd/snapshot.hpp"

namespace vpd {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliState {
    RunConfig config;
    bool json_output = false;
    std::optional<unsigned> force_k;

    // describe / drill
    std::optional<unsigned> viewpoint;
    std::string terms;
    std::string snapshot_dir;
    std::optional<std::size_t> drill_n;
    std::optional<std::size_t> drill_m;

    // eval
    bool exclude_noisy = false;

    // serve
    std::string bind = "127.0.0.1:8080";
    bool cors = false;
    std::string ui_dir;
};

template <typename T>
CLI::Option* flag_option(CLI::App& app, const std::string& name, T& target, const std::string& help) {
    std::string env = "VPD_" + name.substr(2);
    for (char& c : env) c = c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return app.add_option(name, target, help)->envname(env);
}

void add_input_options(CLI::App& cmd, CliState& s) {
    auto& c = s.config;
    flag_option(cmd, "--posts", c.posts_path, "posts.jsonl");
    flag_option(cmd, "--interactions", c.interactions_path, "interactions.jsonl");
    flag_option(cmd, "--out", c.output_dir, "output directory");
    flag_option(cmd, "--topic", c.topic, "topic label recorded in the manifest");
    flag_option(cmd, "--tau", c.tau, "minimum endorsements per edge")->capture_default_str();
    flag_option(cmd, "--kinds", c.kinds, "interaction kinds to count (retweet,like,reply,other)")
        ->delimiter(',');
    cmd.add_flag("--skip-malformed", c.skip_malformed, "skip malformed input lines instead of failing")
        ->envname("VPD_SKIP_MALFORMED");
    cmd.add_flag("--json", s.json_output, "machine-readable stdout");
}

void add_partition_options(CLI::App& cmd, CliState& s) {
    auto& c = s.config;
    flag_option(cmd, "--k-max", c.k_max, "largest k in the sweep")->capture_default_str();
    flag_option(cmd, "--epsilon", c.epsilon, "volume balance tolerance")->capture_default_str();
    flag_option(cmd, "--seed", c.seed, "partitioning seed")->capture_default_str();
}

void add_select_options(CLI::App& cmd, CliState& s) {
    flag_option(cmd, "--delta", s.config.delta, "conductance threshold")->capture_default_str();
    flag_option(cmd, "--force-k", s.force_k, "use this k instead of the automatic choice");
}

void add_text_options(CLI::App& cmd, CliState& s) {
    auto& c = s.config;
    flag_option(cmd, "--n-terms", c.n_terms, "top-n cut for term lists")->capture_default_str();
    flag_option(cmd, "--m-terms", c.m_terms, "descriptive terms reported per viewpoint")
        ->capture_default_str();
    flag_option(cmd, "--normalizer", c.normalizer, "stem or identity")->capture_default_str();
    flag_option(cmd, "--stopwords", c.stopwords_path, "stopword file, one word per line");
}

std::vector<std::string> split_terms(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string t;
    while (std::getline(in, t, ',')) {
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

void emit(std::ostream& out, const CliState& s, const json& j, const std::string& human) {
    if (s.json_output) {
        out << j.dump(2) << '\n';
    } else {
        out << human;
    }
}

std::string selection_summary(const ViewpointSelection& sel) {
    std::ostringstream o;
    o << "k = " << sel.chosen_k << (sel.forced ? " (forced)" : "") << ", delta = " << sel.delta
      << ", verdict " << to_string(sel.verdict) << "\n  viewpoints:";
    for (ClusterId c : sel.viewpoint_clusters) o << ' ' << c;
    o << "\n  noisy:";
    for (ClusterId c : sel.noisy_clusters) o << ' ' << c;
    o << '\n';
    return o.str();
}

std::string terms_summary(const json& j) {
    std::ostringstream o;
    o << "viewpoint " << j.at("viewpoint").get<ClusterId>();
    if (!j.at("query_terms").empty()) o << " / " << j.at("query_terms").dump();
    o << '\n';
    for (const json& t : j.at("terms")) {
        char score[32];
        std::snprintf(score, sizeof score, "%+.4f", t.at("score").get<double>());
        o << "  " << score << "  " << t.at("term").get<std::string>() << '\n';
    }
    return o.str();
}

int exit_for(const ViewpointSelection& sel) {
    return sel.verdict == Verdict::viewpoints_found ? kExitOk : kExitNoClearViewpoints;
}

PipelineResult run_stage(const CliState& s, Stage stage, const std::string& command) {
    RunConfig config = s.config;
    if (s.force_k) config.force_k = *s.force_k;
    config.validate();
    PipelineInputs inputs = load_inputs(config);
    PipelineResult r = run_pipeline(config, inputs, stage);
    write_manifest(config, r.meta, command, config.output_dir);
    return r;
}

int cmd_build(const CliState& s, std::ostream& out) {
    PipelineResult r = run_stage(s, Stage::graph, "build");
    const fs::path dir = r.config.output_dir;
    {
        std::ofstream f(dir / "graph.json");
        write_graph_json(f, r.graph);
    }
    {
        std::ofstream f(dir / "graph.graphml");
        write_graphml(f, r.graph);
    }
    json stats{{"graph", to_json(r.stats)},
               {"dataset", to_json(r.meta, false)},
               {"excluded_users", r.graph.excluded_users().size()}};
    write_json_file(dir / "stats.json", stats);
    std::ostringstream h;
    h << "graph: " << r.stats.nodes << " users, " << r.stats.edges << " edges, volume "
      << r.stats.total_volume << " (" << r.graph.excluded_users().size() << " users excluded)\n";
    emit(out, s, stats, h.str());
    return kExitOk;
}

void write_sweep_outputs(const PipelineResult& r) {
    const fs::path dir = r.config.output_dir;
    {
        std::ofstream f(dir / "sweep.csv");
        write_sweep_csv(f, sweep_rows(r.profile));
    }
    fs::create_directories(dir / "partitions");
    for (const ProfileLevel& level : r.profile.levels) {
        write_json_file(dir / "partitions" / ("k" + std::to_string(level.k) + ".json"),
                        partition_to_json(r.graph, level));
    }
}

int cmd_sweep(const CliState& s, std::ostream& out) {
    PipelineResult r = run_stage(s, Stage::sweep, "sweep");
    write_sweep_outputs(r);
    const auto rows = sweep_rows(r.profile);
    json j = json::array();
    for (const SweepRow& row : rows) j.push_back(to_json(row));
    std::ostringstream h;
    write_sweep_csv(h, rows);
    emit(out, s, j, h.str());
    return kExitOk;
}

int cmd_select(const CliState& s, std::ostream& out) {
    PipelineResult r = run_stage(s, Stage::select, "select");
    write_sweep_outputs(r);
    write_json_file(fs::path(r.config.output_dir) / "selection.json", to_json(*r.selection));
    emit(out, s, to_json(*r.selection), selection_summary(*r.selection));
    return exit_for(*r.selection);
}

int cmd_describe(const CliState& s, std::ostream& out) {
    if (s.config.posts_path.empty()) throw InputError("describe needs --posts");
    PipelineResult r = run_stage(s, Stage::select, "describe");
    if (r.selection->verdict != Verdict::viewpoints_found && !s.viewpoint) {
        emit(out, s, to_json(*r.selection), selection_summary(*r.selection));
        return kExitNoClearViewpoints;
    }
    const ViewpointCorpus corpus = ViewpointCorpus::build(
        load_inputs(r.config).posts.posts(), r.config.tokenizer(), r.clustering(), *r.selection);
    std::vector<ClusterId> targets =
        s.viewpoint ? std::vector<ClusterId>{*s.viewpoint} : r.selection->viewpoint_clusters;
    const fs::path dir = fs::path(r.config.output_dir) / "terms";
    fs::create_directories(dir);
    json all = json::array();
    std::string human;
    for (ClusterId v : targets) {
        ViewpointDescription d = describe_viewpoint(corpus, v, {r.config.n_terms, r.config.m_terms});
        json j = description_to_json(d);
        write_json_file(dir / ("viewpoint_" + std::to_string(v) + ".json"), j);
        json brief = terms_response(v, d.ranked, r.config.m_terms);
        human += terms_summary(brief);
        all.push_back(std::move(brief));
    }
    emit(out, s, s.viewpoint ? all.front() : all, human);
    return exit_for(*r.selection);
}

int cmd_drill(const CliState& s, std::ostream& out) {
    if (!s.viewpoint) throw ParameterError("drill needs --viewpoint");
    const auto terms = split_terms(s.terms);
    if (terms.empty()) throw ParameterError("drill needs --terms");

    std::optional<ViewpointCorpus> corpus;
    IrdParams params{s.config.n_terms, s.config.drill_m_terms};
    if (!s.snapshot_dir.empty()) {
        Snapshot snap = Snapshot::load(s.snapshot_dir);
        if (!snap.corpus) throw InputError("snapshot has no corpus.json");
        corpus = std::move(snap.corpus);
        params = snap.drill_defaults;
    } else {
        if (s.config.posts_path.empty()) throw InputError("drill needs --posts or --snapshot");
        RunConfig config = s.config;
        if (s.force_k) config.force_k = *s.force_k;
        config.validate();
        PipelineInputs inputs = load_inputs(config);
        PipelineResult r = run_pipeline(config, inputs, Stage::select);
        corpus = ViewpointCorpus::build(inputs.posts.posts(), config.tokenizer(), r.clustering(),
                                        *r.selection);
    }
    if (s.drill_n) params.n = *s.drill_n;
    if (s.drill_m) params.m = *s.drill_m;
    json j = drilldown_to_json(drill_terms(*corpus, *s.viewpoint, terms, params), params);
    emit(out, s, j, terms_summary(j));
    return kExitOk;
}

int cmd_eval(const CliState& s, std::ostream& out) {
    if (s.config.truth_path.empty()) throw InputError("eval needs --truth");
    PipelineResult r = run_stage(s, Stage::select, "eval");
    std::ifstream in(r.config.truth_path);
    if (!in) throw InputError("cannot open " + r.config.truth_path);
    const GroundTruth truth = read_ground_truth(in);
    EvaluationOptions opts;
    if (s.exclude_noisy) {
        opts.excluded_clusters.insert(r.selection->noisy_clusters.begin(), r.selection->noisy_clusters.end());
    }
    const EvaluationReport report = evaluate(r.clustering(), truth, opts);
    json j = to_json(report);
    write_json_file(fs::path(r.config.output_dir) / "report.json", j);
    std::ostringstream h;
    h << "purity " << report.purity << ", nmi " << report.nmi << " over " << report.n_evaluated
      << " users (" << report.n_unlabeled << " unlabeled)\n";
    for (const std::string& w : report.warnings) h << "warning: " << w << '\n';
    emit(out, s, j, h.str());
    return kExitOk;
}

int cmd_export(const CliState& s, std::ostream& out) {
    PipelineResult r = run_stage(s, Stage::describe, "export");
    write_snapshot(r, r.config.output_dir);
    json j{{"snapshot", r.config.output_dir},
           {"selection", to_json(*r.selection)},
           {"warnings", r.warnings}};
    std::string human = "snapshot written to " + r.config.output_dir + "\n" + selection_summary(*r.selection);
    for (const std::string& w : r.warnings) human += "warning: " + w + "\n";
    emit(out, s, j, human);
    return exit_for(*r.selection);
}

ApiServer* g_server = nullptr;

void handle_signal(int) {
    if (g_server) g_server->stop();
}

int cmd_serve(const CliState& s, std::ostream& out) {
    if (s.snapshot_dir.empty()) throw InputError("serve needs --snapshot");
    const auto colon = s.bind.rfind(':');
    if (colon == std::string::npos) throw ParameterError("--bind expects host:port");
    const std::string host = s.bind.substr(0, colon);
    int port = 0;
    try {
        port = std::stoi(s.bind.substr(colon + 1));
    } catch (const std::exception&) {
        throw ParameterError("--bind expects host:port");
    }
    ApiService service(Snapshot::load(s.snapshot_dir));
    ApiServer server(service, {s.cors, s.ui_dir});
    const int bound = server.bind(host, port);
    if (bound < 0) throw ParameterError("cannot bind " + s.bind);
    out << "serving " << s.snapshot_dir << " on http://" << host << ':' << bound << std::endl;
    g_server = &server;
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    server.listen();
    g_server = nullptr;
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Viewpoint discovery and rank-difference term analysis over endorsement networks", "vpd"};
    app.require_subcommand(1);
    CliState s;

    auto* build = app.add_subcommand("build", "build the interaction graph and its statistics");
    add_input_options(*build, s);

    auto* sweep = app.add_subcommand("sweep", "partition for k = 2..k-max and write the conductance sweep");
    add_input_options(*sweep, s);
    add_partition_options(*sweep, s);

    auto* select = app.add_subcommand("select", "choose k and the viewpoint clusters");
    add_input_options(*select, s);
    add_partition_options(*select, s);
    add_select_options(*select, s);

    auto* describe = app.add_subcommand("describe", "rank-difference terms per viewpoint");
    add_input_options(*describe, s);
    add_partition_options(*describe, s);
    add_select_options(*describe, s);
    add_text_options(*describe, s);
    describe->add_option("--viewpoint", s.viewpoint, "viewpoint cluster (default: all)");
    describe->add_option("--n", s.config.n_terms, "alias of --n-terms");
    describe->add_option("--m", s.config.m_terms, "alias of --m-terms");

    auto* drill = app.add_subcommand("drill", "terms characterizing texts that mention a term set");
    add_input_options(*drill, s);
    add_partition_options(*drill, s);
    add_select_options(*drill, s);
    add_text_options(*drill, s);
    drill->add_option("--snapshot", s.snapshot_dir, "drill over an exported snapshot instead of inputs");
    drill->add_option("--viewpoint", s.viewpoint, "viewpoint cluster")->required();
    drill->add_option("--terms", s.terms, "comma-separated query terms")->required();
    drill->add_option("--n", s.drill_n, "top-n cut");
    drill->add_option("--m", s.drill_m, "terms to report (default 5)");

    auto* eval = app.add_subcommand("eval", "purity and NMI against ground truth");
    add_input_options(*eval, s);
    add_partition_options(*eval, s);
    add_select_options(*eval, s);
    flag_option(*eval, "--truth", s.config.truth_path, "truth CSV (user,label)")->required();
    eval->add_flag("--exclude-noisy", s.exclude_noisy, "leave noisy clusters out of the evaluation");

    auto* exp = app.add_subcommand("export", "run everything and write a snapshot directory");
    add_input_options(*exp, s);
    add_partition_options(*exp, s);
    add_select_options(*exp, s);
    add_text_options(*exp, s);

    auto* serve = app.add_subcommand("serve", "serve a snapshot over HTTP");
    serve->add_option("--snapshot", s.snapshot_dir, "snapshot directory")->required()->envname("VPD_SNAPSHOT");
    serve->add_option("--bind", s.bind, "host:port")->capture_default_str()->envname("VPD_BIND");
    serve->add_flag("--cors", s.cors, "allow any origin");
    serve->add_option("--ui", s.ui_dir, "static UI bundle to serve at /");

    std::vector<std::string> argv_storage{"vpd"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const std::string& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (build->parsed()) return cmd_build(s, out);
        if (sweep->parsed()) return cmd_sweep(s, out);
        if (select->parsed()) return cmd_select(s, out);
        if (describe->parsed()) return cmd_describe(s, out);
        if (drill->parsed()) return cmd_drill(s, out);
        if (eval->parsed()) return cmd_eval(s, out);
        if (exp->parsed()) return cmd_export(s, out);
        if (serve->parsed()) return cmd_serve(s, out);
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const ParameterError& e) {
        err << "parameter error: " << e.what() << '\n';
        return kExitParameterError;
    } catch (const NotFoundError& e) {
        err << "parameter error: " << e.what() << '\n';
        return kExitParameterError;
    } catch (const DegenerateSplitError& e) {
        err << "degenerate split: " << e.what() << '\n';
        return kExitParameterError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "input error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const nlohmann::json::exception& e) {
        err << "input error: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitUsage;
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace vpd
