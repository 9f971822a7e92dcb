#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace vpd {

using NodeId = std::uint32_t;
using ClusterId = std::uint32_t;
using Weight = std::int64_t;

struct Edge {
    NodeId u;
    NodeId v;
    Weight w;

    bool operator==(const Edge&) const = default;
};

struct Neighbor {
    NodeId node;
    Weight w;
};

/// Undirected weighted graph in compressed adjacency form.
///
/// Every edge is stored in both endpoints' adjacency lists, sorted by
/// neighbour id. Each node also carries a weight; for graphs built from
/// interactions that weight is the node's weighted degree, and coarse graphs
/// carry the summed degrees of the fine nodes they represent, so cluster
/// volume is always the sum of node weights.
class Graph {
public:
    Graph() = default;

    /// Builds a graph from an edge list. Parallel edges are merged by summing
    /// weights; self-loops and non-positive weights are rejected. Node weights
    /// default to the weighted degree.
    static Graph from_edges(NodeId num_nodes, std::span<const Edge> edges);

    /// Same, with explicit node weights (one per node).
    static Graph from_edges(NodeId num_nodes, std::span<const Edge> edges,
                            std::vector<Weight> node_weights);

    NodeId num_nodes() const noexcept { return static_cast<NodeId>(node_weight_.size()); }
    std::size_t num_edges() const noexcept { return adjacency_.size() / 2; }

    std::span<const Neighbor> neighbors(NodeId u) const noexcept {
        return {adjacency_.data() + offsets_[u], adjacency_.data() + offsets_[u + 1]};
    }

    Weight node_weight(NodeId u) const noexcept { return node_weight_[u]; }
    Weight weighted_degree(NodeId u) const noexcept { return degree_[u]; }
    Weight total_node_weight() const noexcept { return total_node_weight_; }
    /// Sum of edge weights, each undirected edge counted once.
    Weight total_edge_weight() const noexcept { return total_edge_weight_; }

    /// Weight of edge (u, v), 0 when absent.
    Weight edge_weight(NodeId u, NodeId v) const noexcept;

    /// Each undirected edge once, with u < v, ordered by (u, v).
    std::vector<Edge> edges() const;

    /// Subgraph induced by `nodes` (renumbered in the given order). Node
    /// weights are carried over unchanged.
    Graph induced(std::span<const NodeId> nodes) const;

private:
    std::vector<std::size_t> offsets_{0};
    std::vector<Neighbor> adjacency_;
    std::vector<Weight> node_weight_;
    std::vector<Weight> degree_;
    Weight total_node_weight_ = 0;
    Weight total_edge_weight_ = 0;
};

/// Sizes of connected components, largest first.
std::vector<std::size_t> component_sizes(const Graph& g);

}  // namespace vpd
