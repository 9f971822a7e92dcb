#include "vpd/snapshot.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "vpd/error.hpp"

namespace vpd {

using nlohmann::json;
namespace fs = std::filesystem;

std::vector<SweepRow> sweep_rows(const ConductanceProfile& profile) {
    std::vector<SweepRow> rows;
    for (const ProfileLevel& level : profile.levels) {
        for (const ClusterQuality& q : level.clusters) rows.push_back({level.k, q});
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "k,cluster,size,volume,cut_weight,conductance\n";
    char buf[64];
    for (const SweepRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g", r.quality.conductance);
        out << r.k << ',' << r.quality.cluster << ',' << r.quality.size << ',' << r.quality.volume
            << ',' << r.quality.cut_weight << ',' << buf << '\n';
    }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("k,cluster,size,volume,cut_weight,conductance", 0) != 0) {
        throw InputError("sweep csv: missing header");
    }
    std::vector<SweepRow> rows;
    std::size_t number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty() || line == "\r") continue;
        std::istringstream fields(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(fields, cell, ',')) cells.push_back(cell);
        if (cells.size() != 6) throw InputError("sweep csv line " + std::to_string(number) + ": expected 6 columns");
        try {
            SweepRow r;
            r.k = static_cast<ClusterId>(std::stoul(cells[0]));
            r.quality.cluster = static_cast<ClusterId>(std::stoul(cells[1]));
            r.quality.size = std::stoull(cells[2]);
            r.quality.volume = std::stoll(cells[3]);
            r.quality.cut_weight = std::stoll(cells[4]);
            r.quality.conductance = std::stod(cells[5]);
            rows.push_back(r);
        } catch (const std::logic_error&) {
            throw InputError("sweep csv line " + std::to_string(number) + ": bad number");
        }
    }
    return rows;
}

json to_json(const SweepRow& r) {
    return {{"k", r.k},
            {"cluster", r.quality.cluster},
            {"size", r.quality.size},
            {"volume", r.quality.volume},
            {"cut_weight", r.quality.cut_weight},
            {"conductance", r.quality.conductance}};
}

json to_json(const RunConfig& c) {
    json j{{"posts", c.posts_path},
           {"interactions", c.interactions_path},
           {"truth", c.truth_path},
           {"output_dir", c.output_dir},
           {"topic", c.topic},
           {"tau", c.tau},
           {"kinds", c.kinds},
           {"skip_malformed", c.skip_malformed},
           {"delta", c.delta},
           {"k_max", c.k_max},
           {"force_k", nullptr},
           {"epsilon", c.epsilon},
           {"seed", c.seed},
           {"n_terms", c.n_terms},
           {"m_terms", c.m_terms},
           {"drill_m_terms", c.drill_m_terms},
           {"normalizer", c.normalizer},
           {"stopwords", c.stopwords_path}};
    if (c.force_k) j["force_k"] = *c.force_k;
    return j;
}

json to_json(const GraphStats& s) {
    return {{"nodes", s.nodes},
            {"edges", s.edges},
            {"total_volume", s.total_volume},
            {"component_sizes", s.component_sizes}};
}

json to_json(const DatasetMeta& m, bool with_timestamp) {
    json j{{"topic", m.topic},
           {"source", m.source},
           {"posts", m.posts},
           {"interactions", m.interactions},
           {"self_interactions_dropped", m.self_interactions_dropped},
           {"unknown_post_records", m.unknown_post_records},
           {"skipped_lines", m.skipped_lines}};
    if (with_timestamp) j["ingested_at"] = m.ingested_at;
    return j;
}

json to_json(const ViewpointSelection& s) {
    return {{"chosen_k", s.chosen_k},
            {"delta", s.delta},
            {"viewpoints", s.viewpoint_clusters},
            {"noisy", s.noisy_clusters},
            {"verdict", to_string(s.verdict)},
            {"forced", s.forced}};
}

ViewpointSelection selection_from_json(const json& j) {
    try {
        ViewpointSelection s;
        s.chosen_k = j.at("chosen_k").get<ClusterId>();
        s.delta = j.at("delta").get<double>();
        s.viewpoint_clusters = j.at("viewpoints").get<std::vector<ClusterId>>();
        s.noisy_clusters = j.at("noisy").get<std::vector<ClusterId>>();
        s.verdict = parse_verdict(j.at("verdict").get<std::string>());
        s.forced = j.value("forced", false);
        return s;
    } catch (const json::exception& e) {
        throw InputError(std::string("selection json: ") + e.what());
    }
}

json to_json(const TermFrequencyList& list) {
    json arr = json::array();
    for (const TermFrequency& t : list.entries) arr.push_back({{"term", t.term}, {"freq", t.freq}});
    return arr;
}

json to_json(const RankedTerm& t) {
    json j{{"term", t.term},
           {"score", t.score},
           {"subject_rank", t.subject_rank},
           {"contrast_rank", nullptr},
           {"subject_freq", t.subject_freq}};
    if (t.contrast_rank) j["contrast_rank"] = *t.contrast_rank;
    return j;
}

RankedTerm ranked_term_from_json(const json& j) {
    RankedTerm t;
    t.term = j.at("term").get<std::string>();
    t.score = j.at("score").get<double>();
    t.subject_rank = j.at("subject_rank").get<std::size_t>();
    if (!j.at("contrast_rank").is_null()) t.contrast_rank = j.at("contrast_rank").get<std::size_t>();
    t.subject_freq = j.value("subject_freq", std::size_t{0});
    return t;
}

json to_json(const EvaluationReport& r) {
    return {{"purity", r.purity},
            {"nmi", r.nmi},
            {"n_evaluated", r.n_evaluated},
            {"n_unlabeled", r.n_unlabeled},
            {"n_unclustered", r.n_unclustered},
            {"warnings", r.warnings}};
}

json partition_to_json(const InteractionGraph& graph, const ProfileLevel& level) {
    json assignment = json::object();
    for (NodeId u = 0; u < graph.users().size(); ++u) {
        assignment[graph.users()[u]] = level.result.partition.assignment[u];
    }
    json clusters = json::array();
    for (const ClusterQuality& q : level.clusters) clusters.push_back(to_json(SweepRow{level.k, q}));
    return {{"k", level.k},
            {"assignment", std::move(assignment)},
            {"edge_cut", level.result.edge_cut},
            {"balance_achieved", level.result.balance_achieved},
            {"clusters", std::move(clusters)}};
}

namespace {

json term_array(const std::vector<RankedTerm>& terms) {
    json arr = json::array();
    for (const RankedTerm& t : terms) arr.push_back(to_json(t));
    return arr;
}

}  // namespace

json description_to_json(const ViewpointDescription& d) {
    return {{"viewpoint", d.viewpoint},
            {"query_terms", json::array()},
            {"terms", term_array(d.terms)},
            {"subject_size", d.ranked.subject_size},
            {"contrast_size", d.ranked.contrast_size},
            {"ranked", term_array(d.ranked.terms)},
            {"subject_terms", to_json(d.subject)},
            {"contrast_terms", to_json(d.contrast)}};
}

json terms_response(ClusterId viewpoint, const RankDiffResult& ranked, std::size_t m) {
    return {{"viewpoint", viewpoint},
            {"query_terms", json::array()},
            {"terms", term_array(top_descriptive(ranked, m))},
            {"subject_size", ranked.subject_size},
            {"contrast_size", ranked.contrast_size}};
}

json drilldown_to_json(const TermDrilldown& d, const IrdParams& params) {
    return {{"viewpoint", d.viewpoint},
            {"query_terms", d.query_terms},
            {"terms", term_array(d.terms)},
            {"n", params.n},
            {"m", params.m},
            {"subject_size", d.ranked.subject_size},
            {"contrast_size", d.ranked.contrast_size},
            {"subject_texts", d.subject_texts},
            {"contrast_texts", d.contrast_texts}};
}

json corpus_to_json(const ViewpointCorpus& corpus) {
    json clusters = json::array();
    for (ClusterId c = 0; c < corpus.num_clusters(); ++c) clusters.push_back(corpus.texts(c));
    return {{"normalizer", corpus.tokenizer().normalizer().name()},
            {"stopwords", corpus.tokenizer().stopwords()},
            {"selection", to_json(corpus.selection())},
            {"clusters", std::move(clusters)}};
}

ViewpointCorpus corpus_from_json(const json& j) {
    try {
        Tokenizer tokenizer(j.at("stopwords").get<std::set<std::string>>(),
                            make_normalizer(j.at("normalizer").get<std::string>()));
        return ViewpointCorpus(selection_from_json(j.at("selection")),
                               j.at("clusters").get<std::vector<std::vector<TokenList>>>(),
                               std::move(tokenizer));
    } catch (const json::exception& e) {
        throw InputError(std::string("corpus json: ") + e.what());
    }
}

void write_json_file(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

json read_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

void write_manifest(const RunConfig& config, const DatasetMeta& meta, const std::string& command,
                    const fs::path& dir) {
    fs::create_directories(dir);
    write_json_file(dir / "manifest.json", {{"format_version", kSnapshotFormatVersion},
                                            {"command", command},
                                            {"created_at", meta.ingested_at},
                                            {"seed", config.seed},
                                            {"config", to_json(config)},
                                            {"meta", to_json(meta, true)}});
}

void write_snapshot(const PipelineResult& r, const fs::path& dir) {
    fs::create_directories(dir / "partitions");
    fs::create_directories(dir / "terms");
    write_manifest(r.config, r.meta, "export", dir);
    {
        std::ofstream out(dir / "graph.json");
        write_graph_json(out, r.graph);
    }
    write_json_file(dir / "stats.json", {{"graph", to_json(r.stats)},
                                         {"dataset", to_json(r.meta, false)},
                                         {"excluded_users", r.graph.excluded_users().size()},
                                         {"warnings", r.warnings}});
    {
        std::ofstream out(dir / "sweep.csv");
        write_sweep_csv(out, sweep_rows(r.profile));
    }
    for (const ProfileLevel& level : r.profile.levels) {
        write_json_file(dir / "partitions" / ("k" + std::to_string(level.k) + ".json"),
                        partition_to_json(r.graph, level));
    }
    if (r.selection) {
        write_json_file(dir / "selection.json", to_json(*r.selection));
        std::vector<ClusterId> assignment = r.profile.at(r.selection->chosen_k)->result.partition.assignment;
        std::ofstream out(dir / "graph.graphml");
        write_graphml(out, r.graph, &assignment);
    }
    for (const ViewpointDescription& d : r.descriptions) {
        write_json_file(dir / "terms" / ("viewpoint_" + std::to_string(d.viewpoint) + ".json"),
                        description_to_json(d));
    }
    if (r.corpus) write_json_file(dir / "corpus.json", corpus_to_json(*r.corpus));
}

Snapshot Snapshot::load(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw InputError("snapshot directory " + dir.string() + " not found");
    Snapshot s;
    s.manifest = read_json_file(dir / "manifest.json");
    if (s.manifest.value("format_version", 0) != kSnapshotFormatVersion) {
        throw InputError("snapshot format version mismatch");
    }
    s.stats = read_json_file(dir / "stats.json");
    {
        std::ifstream in(dir / "graph.json");
        if (!in) throw InputError("snapshot lacks graph.json");
        s.graph = read_graph_json(in);
    }
    {
        std::ifstream in(dir / "sweep.csv");
        if (!in) throw InputError("snapshot lacks sweep.csv");
        s.sweep = read_sweep_csv(in);
    }
    s.selection = selection_from_json(read_json_file(dir / "selection.json"));
    for (const auto& entry : fs::directory_iterator(dir / "partitions")) {
        json p = read_json_file(entry.path());
        s.partitions.emplace(p.at("k").get<ClusterId>(), std::move(p));
    }
    if (fs::is_directory(dir / "terms")) {
        for (const auto& entry : fs::directory_iterator(dir / "terms")) {
            json t = read_json_file(entry.path());
            RankDiffResult ranked;
            ranked.subject_size = t.at("subject_size").get<std::size_t>();
            ranked.contrast_size = t.at("contrast_size").get<std::size_t>();
            for (const json& term : t.at("ranked")) ranked.terms.push_back(ranked_term_from_json(term));
            s.viewpoint_terms.emplace(t.at("viewpoint").get<ClusterId>(), std::move(ranked));
        }
    }
    if (fs::exists(dir / "corpus.json")) s.corpus = corpus_from_json(read_json_file(dir / "corpus.json"));
    const json& config = s.manifest.at("config");
    s.drill_defaults.n = config.value("n_terms", std::size_t{200});
    s.drill_defaults.m = config.value("drill_m_terms", std::size_t{5});
    return s;
}

}  // namespace vpd
