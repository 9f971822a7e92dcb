#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vpd/graph_builder.hpp"
#include "vpd/ird.hpp"
#include "vpd/partitioner.hpp"
#include "vpd/selector.hpp"
#include "vpd/text.hpp"

namespace vpd {

struct RunConfig {
    std::string posts_path;
    std::string interactions_path;
    std::string truth_path;
    std::string output_dir = "vpd-out";
    std::string topic;

    int tau = 2;
    std::vector<std::string> kinds;
    bool skip_malformed = false;

    double delta = 0.10;
    ClusterId k_max = 6;
    std::optional<ClusterId> force_k;
    double epsilon = 0.10;
    std::uint64_t seed = 1;

    std::size_t n_terms = 200;
    std::size_t m_terms = 10;
    std::size_t drill_m_terms = 5;
    std::string normalizer = "stem";
    std::string stopwords_path;

    /// Throws ParameterError on the first out-of-range value.
    void validate() const;
    PartitionParams partition_params() const;
    Tokenizer tokenizer() const;
};

struct PipelineInputs {
    PostCollection posts;
    InteractionSet interactions;
    DatasetMeta meta;
};

/// Reads the configured files. Posts are optional (empty when no path).
PipelineInputs load_inputs(const RunConfig& config);

/// Stages that run_pipeline executes, in order.
enum class Stage { graph, sweep, select, describe };

struct PipelineResult {
    RunConfig config;
    DatasetMeta meta;
    InteractionGraph graph;
    GraphStats stats;
    ConductanceProfile profile;
    std::optional<ViewpointSelection> selection;
    std::optional<ViewpointCorpus> corpus;
    std::vector<ViewpointDescription> descriptions;
    std::vector<std::string> warnings;

    /// user -> cluster at the selected k.
    std::map<UserId, ClusterId> clustering() const;
    std::map<UserId, ClusterId> clustering(ClusterId k) const;
};

/// Runs every stage up to and including `last`. Description is skipped when
/// no posts were given or the verdict is no_clear_viewpoints.
PipelineResult run_pipeline(const RunConfig& config, const PipelineInputs& inputs,
                            Stage last = Stage::describe);

}  // namespace vpd
