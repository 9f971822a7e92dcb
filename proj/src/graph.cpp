#include "vpd/graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "vpd/error.hpp"

namespace vpd {

Graph Graph::from_edges(NodeId num_nodes, std::span<const Edge> edges) {
    return from_edges(num_nodes, edges, {});
}

Graph Graph::from_edges(NodeId num_nodes, std::span<const Edge> edges,
                        std::vector<Weight> node_weights) {
    std::vector<Edge> directed;
    directed.reserve(edges.size() * 2);
    for (const Edge& e : edges) {
        if (e.u >= num_nodes || e.v >= num_nodes) {
            throw ParameterError("edge endpoint out of range");
        }
        if (e.u == e.v) {
            throw ParameterError("self-loop on node " + std::to_string(e.u));
        }
        if (e.w <= 0) {
            throw ParameterError("edge weight must be positive");
        }
        directed.push_back(e);
        directed.push_back({e.v, e.u, e.w});
    }
    std::sort(directed.begin(), directed.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });

    Graph g;
    g.offsets_.assign(num_nodes + 1, 0);
    g.degree_.assign(num_nodes, 0);
    for (std::size_t i = 0; i < directed.size();) {
        const Edge& e = directed[i];
        Weight w = 0;
        std::size_t j = i;
        for (; j < directed.size() && directed[j].u == e.u && directed[j].v == e.v; ++j) {
            w += directed[j].w;
        }
        g.adjacency_.push_back({e.v, w});
        g.offsets_[e.u + 1]++;
        g.degree_[e.u] += w;
        g.total_edge_weight_ += w;
        i = j;
    }
    g.total_edge_weight_ /= 2;
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());

    if (node_weights.empty()) {
        g.node_weight_ = g.degree_;
    } else {
        if (node_weights.size() != num_nodes) {
            throw ParameterError("node weight count does not match node count");
        }
        g.node_weight_ = std::move(node_weights);
    }
    g.total_node_weight_ = std::accumulate(g.node_weight_.begin(), g.node_weight_.end(), Weight{0});
    return g;
}

Weight Graph::edge_weight(NodeId u, NodeId v) const noexcept {
    auto adj = neighbors(u);
    auto it = std::lower_bound(adj.begin(), adj.end(), v,
                               [](const Neighbor& n, NodeId id) { return n.node < id; });
    return (it != adj.end() && it->node == v) ? it->w : 0;
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges());
    for (NodeId u = 0; u < num_nodes(); ++u) {
        for (const Neighbor& n : neighbors(u)) {
            if (u < n.node) out.push_back({u, n.node, n.w});
        }
    }
    return out;
}

Graph Graph::induced(std::span<const NodeId> nodes) const {
    constexpr NodeId absent = static_cast<NodeId>(-1);
    std::vector<NodeId> local(num_nodes(), absent);
    std::vector<Weight> weights;
    weights.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        local[nodes[i]] = static_cast<NodeId>(i);
        weights.push_back(node_weight_[nodes[i]]);
    }
    std::vector<Edge> sub;
    for (NodeId u : nodes) {
        for (const Neighbor& n : neighbors(u)) {
            if (local[n.node] != absent && u < n.node) {
                sub.push_back({local[u], local[n.node], n.w});
            }
        }
    }
    return from_edges(static_cast<NodeId>(nodes.size()), sub, std::move(weights));
}

std::vector<std::size_t> component_sizes(const Graph& g) {
    std::vector<char> seen(g.num_nodes(), 0);
    std::vector<std::size_t> sizes;
    std::vector<NodeId> stack;
    for (NodeId s = 0; s < g.num_nodes(); ++s) {
        if (seen[s]) continue;
        std::size_t size = 0;
        seen[s] = 1;
        stack.push_back(s);
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            ++size;
            for (const Neighbor& n : g.neighbors(u)) {
                if (!seen[n.node]) {
                    seen[n.node] = 1;
                    stack.push_back(n.node);
                }
            }
        }
        sizes.push_back(size);
    }
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    return sizes;
}

}  // namespace vpd
