#include "vpd/pipeline.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "vpd/error.hpp"

namespace vpd {

void RunConfig::validate() const {
    if (tau < 1) throw ParameterError("tau must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
    if (k_max < 2) throw ParameterError("k-max must be >= 2");
    if (force_k && (*force_k < 2 || *force_k > k_max)) {
        throw ParameterError("force-k must lie in [2, k-max]");
    }
    if (!(epsilon >= 0.0)) throw ParameterError("epsilon must be >= 0");
    if (n_terms < 1) throw ParameterError("n-terms must be >= 1");
    if (m_terms < 1 || drill_m_terms < 1) throw ParameterError("m-terms must be >= 1");
    make_normalizer(normalizer);
    for (const std::string& k : kinds) parse_interaction_kind(k);
}

PartitionParams RunConfig::partition_params() const {
    PartitionParams p;
    p.k = k_max;
    p.balance_epsilon = epsilon;
    p.seed = seed;
    return p;
}

Tokenizer RunConfig::tokenizer() const {
    std::set<std::string> stop = stopwords_path.empty() ? default_stopwords() : read_stopwords(stopwords_path);
    return Tokenizer(std::move(stop), make_normalizer(normalizer));
}

namespace {

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return in;
}

}  // namespace

PipelineInputs load_inputs(const RunConfig& config) {
    if (config.interactions_path.empty()) throw InputError("no interactions file given");
    IngestOptions opts;
    opts.on_malformed = config.skip_malformed ? OnMalformed::skip : OnMalformed::abort;

    PipelineInputs in;
    if (!config.posts_path.empty()) {
        auto stream = open_input(config.posts_path);
        in.posts = ingest_posts(stream, opts);
    }
    auto stream = open_input(config.interactions_path);
    in.interactions =
        ingest_interactions(stream, opts, config.posts_path.empty() ? nullptr : &in.posts);

    in.meta.topic = config.topic;
    in.meta.source = config.posts_path.empty()
                         ? config.interactions_path
                         : config.posts_path + " + " + config.interactions_path;
    in.meta.ingested_at = utc_timestamp();
    in.meta.posts = in.posts.size();
    in.meta.interactions = in.interactions.records.size();
    in.meta.self_interactions_dropped = in.interactions.self_interactions_dropped;
    in.meta.unknown_post_records = in.interactions.unknown_post_records;
    in.meta.skipped_lines = in.posts.errors.size() + in.interactions.errors.size();
    return in;
}

std::map<UserId, ClusterId> PipelineResult::clustering(ClusterId k) const {
    const ProfileLevel* level = profile.at(k);
    if (!level) throw NotFoundError("no partition for k = " + std::to_string(k));
    std::map<UserId, ClusterId> out;
    for (NodeId u = 0; u < graph.users().size(); ++u) {
        out.emplace(graph.users()[u], level->result.partition.assignment[u]);
    }
    return out;
}

std::map<UserId, ClusterId> PipelineResult::clustering() const {
    if (!selection) throw NotFoundError("no viewpoint selection has been made");
    return clustering(selection->chosen_k);
}

PipelineResult run_pipeline(const RunConfig& config, const PipelineInputs& inputs, Stage last) {
    config.validate();
    PipelineResult r;
    r.config = config;
    r.meta = inputs.meta;

    BuildOptions build;
    build.min_endorsements = config.tau;
    for (const std::string& k : config.kinds) build.kinds.insert(parse_interaction_kind(k));
    r.graph = build_graph(inputs.interactions.records, build);
    r.stats = graph_stats(r.graph.graph());
    if (last == Stage::graph) return r;

    const NodeId nodes = r.graph.graph().num_nodes();
    if (nodes < 2) throw InputError("the interaction graph has fewer than 2 users; nothing to partition");
    ClusterId k_max = config.k_max;
    if (k_max > nodes) {
        r.warnings.push_back("k-max lowered to the node count " + std::to_string(nodes));
        k_max = nodes;
    }
    r.profile = profile(r.graph.graph(), k_max, config.partition_params());
    if (last == Stage::sweep) return r;

    r.selection = select_viewpoints(r.profile, config.delta, config.force_k);
    if (last == Stage::select) return r;

    if (inputs.posts.size() == 0) {
        r.warnings.push_back("no posts given; viewpoint description skipped");
        return r;
    }
    r.corpus = ViewpointCorpus::build(inputs.posts.posts(), config.tokenizer(), r.clustering(),
                                      *r.selection);
    if (r.selection->verdict != Verdict::viewpoints_found) return r;
    for (ClusterId v : r.selection->viewpoint_clusters) {
        try {
            r.descriptions.push_back(describe_viewpoint(*r.corpus, v, {config.n_terms, config.m_terms}));
        } catch (const DegenerateSplitError& e) {
            r.warnings.push_back("viewpoint " + std::to_string(v) + ": " + e.what());
        }
    }
    return r;
}

}  // namespace vpd
