#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "vpd/graph.hpp"

namespace vpd {

/// Assignment of every node to a cluster in [0, k).
struct Partition {
    ClusterId k = 0;
    std::vector<ClusterId> assignment;

    bool operator==(const Partition&) const = default;
};

struct PartitionParams {
    ClusterId k = 2;
    /// Allowed volume overshoot over the per-cluster target.
    double balance_epsilon = 0.10;
    std::uint64_t seed = 1;
    int refinement_passes = 10;
    /// Coarsening stops at this many nodes; 0 selects max(50, 20k).
    NodeId coarsen_stop_size = 0;
    /// Region-growing restarts for the initial bisection.
    int initial_restarts = 8;

    NodeId effective_stop_size() const;
    void validate() const;
};

/// Result of contracting one matching.
struct CoarseGraph {
    Graph graph;
    /// fine node -> coarse node
    std::vector<NodeId> fine_to_coarse;
    /// Total weight of the fine edges that became internal to a coarse node.
    Weight collapsed_weight = 0;

    /// Fine nodes represented by coarse node `c`, ascending.
    std::vector<NodeId> members(NodeId c) const;
};

/// One round of heavy-edge matching and contraction.
///
/// Nodes are visited in a seed-determined shuffle, stably reordered so that
/// nodes with heavier incident edges come first; each unmatched node pairs
/// with the unmatched neighbour joined by its heaviest edge (ties to the lower
/// node id). Pairs whose combined node weight would exceed `max_node_weight`
/// are not contracted.
CoarseGraph coarsen_level(const Graph& graph, std::uint64_t seed,
                          Weight max_node_weight = std::numeric_limits<Weight>::max());

/// Greedy region-growing bisection. Side 0 grows from a seed-chosen start
/// node, absorbing the frontier node with the best internal-to-external edge
/// weight ratio until it holds `target_fraction` of the total node weight.
/// When the frontier empties (disconnected graph) growth continues from the
/// heaviest unassigned node. Best of params.initial_restarts runs.
Partition initial_bisection(const Graph& graph, const PartitionParams& params,
                            double target_fraction = 0.5);

/// Boundary FM refinement under the uniform volume bound
/// (1 + eps) * total / k. Never increases the edge cut.
Partition refine(const Graph& graph, const Partition& partition, const PartitionParams& params);

/// Per-cluster volume limits variant used by recursive bisection. With
/// `allow_cut_increase` the search trades cut for reduced overload; without
/// it the result's cut never exceeds the input's.
Partition refine_with_limits(const Graph& graph, const Partition& partition,
                             const std::vector<double>& max_volume, int passes,
                             bool allow_cut_increase);

/// Coarsen, bisect, then project back refining at every level.
Partition multilevel_bisect(const Graph& graph, const PartitionParams& params,
                            double target_fraction = 0.5);

struct KwayResult {
    Partition partition;
    Weight edge_cut = 0;
    /// max cluster volume / (total / k) - 1
    double balance_achieved = 0.0;
};

/// Recursive multilevel bisection into params.k non-empty clusters.
KwayResult kway_partition(const Graph& graph, const PartitionParams& params);

Weight edge_cut(const Graph& graph, const Partition& partition);

/// Per-cluster sums of node weights.
std::vector<Weight> cluster_volumes(const Graph& graph, const Partition& partition);

/// max volume / (total / k) - 1; 0 for an empty graph.
double imbalance(const Graph& graph, const Partition& partition);

}  // namespace vpd
