#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vpd/graph_builder.hpp"
#include "vpd/ird.hpp"
#include "vpd/metrics.hpp"
#include "vpd/pipeline.hpp"
#include "vpd/selector.hpp"

namespace vpd {

inline constexpr int kSnapshotFormatVersion = 1;

struct SweepRow {
    ClusterId k = 0;
    ClusterQuality quality;

    bool operator==(const SweepRow&) const = default;
};

std::vector<SweepRow> sweep_rows(const ConductanceProfile& profile);

/// Header `k,cluster,size,volume,cut_weight,conductance`; conductance is
/// printed with 17 significant digits so it reads back exactly.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_sweep_csv(std::istream& in);

nlohmann::json to_json(const SweepRow& row);
nlohmann::json to_json(const RunConfig& config);
nlohmann::json to_json(const GraphStats& stats);
nlohmann::json to_json(const DatasetMeta& meta, bool with_timestamp);
nlohmann::json to_json(const ViewpointSelection& selection);
ViewpointSelection selection_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TermFrequencyList& list);
nlohmann::json to_json(const RankedTerm& term);
RankedTerm ranked_term_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EvaluationReport& report);

/// `{"k", "assignment": {user: cluster}, "edge_cut", "balance_achieved", "clusters"}`
nlohmann::json partition_to_json(const InteractionGraph& graph, const ProfileLevel& level);

/// `{"viewpoint", "query_terms": [], "terms": [...], ...}` plus the full
/// ranking and the subject/contrast lists.
nlohmann::json description_to_json(const ViewpointDescription& d);
/// Same shape for a viewpoint's stored ranking cut to m terms.
nlohmann::json terms_response(ClusterId viewpoint, const RankDiffResult& ranked, std::size_t m);
nlohmann::json drilldown_to_json(const TermDrilldown& d, const IrdParams& params);

nlohmann::json corpus_to_json(const ViewpointCorpus& corpus);
ViewpointCorpus corpus_from_json(const nlohmann::json& j);

/// Writes the snapshot directory: manifest.json, graph.json, stats.json,
/// graph.graphml, sweep.csv, selection.json, partitions/k<K>.json,
/// terms/viewpoint_<I>.json, corpus.json. Only the manifest carries a
/// timestamp.
void write_snapshot(const PipelineResult& result, const std::filesystem::path& dir);

/// Writes manifest.json alone (every CLI run does this).
void write_manifest(const RunConfig& config, const DatasetMeta& meta, const std::string& command,
                    const std::filesystem::path& dir);

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::filesystem::path& path);

/// In-memory, read-only view of a snapshot directory.
struct Snapshot {
    nlohmann::json manifest;
    nlohmann::json stats;
    InteractionGraph graph;
    std::vector<SweepRow> sweep;
    ViewpointSelection selection;
    std::map<ClusterId, nlohmann::json> partitions;
    std::map<ClusterId, RankDiffResult> viewpoint_terms;
    std::optional<ViewpointCorpus> corpus;
    IrdParams drill_defaults;

    /// Throws InputError when files are missing or the format version differs.
    static Snapshot load(const std::filesystem::path& dir);
};

}  // namespace vpd
