#include "vpd/selector.hpp"

#include <algorithm>
#include <future>

#include "vpd/error.hpp"

namespace vpd {

namespace {

std::vector<char> membership(const Graph& graph, std::span<const NodeId> cluster) {
    std::vector<char> in(graph.num_nodes(), 0);
    for (NodeId u : cluster) {
        if (u >= graph.num_nodes()) throw ParameterError("cluster node out of range");
        in[u] = 1;
    }
    return in;
}

double ratio(Weight cut, Weight vol_in, Weight vol_out) {
    const Weight denom = std::min(vol_in, vol_out);
    return denom > 0 ? static_cast<double>(cut) / static_cast<double>(denom) : 0.0;
}

}  // namespace

Weight volume(const Graph& graph, std::span<const NodeId> cluster) {
    const auto in = membership(graph, cluster);
    Weight v = 0;
    for (NodeId u = 0; u < graph.num_nodes(); ++u) {
        if (in[u]) v += graph.weighted_degree(u);
    }
    return v;
}

Weight cut_weight(const Graph& graph, std::span<const NodeId> cluster) {
    const auto in = membership(graph, cluster);
    Weight cut = 0;
    for (NodeId u = 0; u < graph.num_nodes(); ++u) {
        if (!in[u]) continue;
        for (const Neighbor& nb : graph.neighbors(u)) {
            if (!in[nb.node]) cut += nb.w;
        }
    }
    return cut;
}

double conductance(const Graph& graph, std::span<const NodeId> cluster) {
    const auto in = membership(graph, cluster);
    const auto members = std::count(in.begin(), in.end(), 1);
    if (members == 0) throw ParameterError("conductance of an empty cluster");
    if (members == static_cast<long>(graph.num_nodes())) {
        throw ParameterError("conductance needs a non-empty complement");
    }
    const Weight vol = volume(graph, cluster);
    const Weight total = 2 * graph.total_edge_weight();
    return ratio(cut_weight(graph, cluster), vol, total - vol);
}

std::vector<ClusterQuality> cluster_qualities(const Graph& graph, const Partition& partition) {
    std::vector<ClusterQuality> q(partition.k);
    for (ClusterId c = 0; c < partition.k; ++c) q[c].cluster = c;
    for (NodeId u = 0; u < graph.num_nodes(); ++u) {
        ClusterQuality& cq = q[partition.assignment[u]];
        ++cq.size;
        cq.volume += graph.weighted_degree(u);
        for (const Neighbor& nb : graph.neighbors(u)) {
            if (partition.assignment[nb.node] != partition.assignment[u]) cq.cut_weight += nb.w;
        }
    }
    const Weight total = 2 * graph.total_edge_weight();
    for (ClusterQuality& cq : q) cq.conductance = ratio(cq.cut_weight, cq.volume, total - cq.volume);
    return q;
}

const ProfileLevel* ConductanceProfile::at(ClusterId k) const {
    for (const ProfileLevel& level : levels) {
        if (level.k == k) return &level;
    }
    return nullptr;
}

ConductanceProfile profile(const Graph& graph, ClusterId k_max, const PartitionParams& params) {
    if (k_max < 2) throw ParameterError("k_max must be >= 2");
    if (graph.num_nodes() < k_max) {
        throw ParameterError("graph has fewer nodes than k_max");
    }
    std::vector<std::future<ProfileLevel>> tasks;
    for (ClusterId k = 2; k <= k_max; ++k) {
        tasks.push_back(std::async(std::launch::async, [&graph, params, k] {
            PartitionParams p = params;
            p.k = k;
            ProfileLevel level;
            level.k = k;
            level.result = kway_partition(graph, p);
            level.clusters = cluster_qualities(graph, level.result.partition);
            return level;
        }));
    }
    ConductanceProfile out;
    for (auto& t : tasks) out.levels.push_back(t.get());
    return out;
}

std::string to_string(Verdict v) {
    return v == Verdict::viewpoints_found ? "viewpoints_found" : "no_clear_viewpoints";
}

Verdict parse_verdict(const std::string& s) {
    if (s == "viewpoints_found") return Verdict::viewpoints_found;
    if (s == "no_clear_viewpoints") return Verdict::no_clear_viewpoints;
    throw InputError("unknown verdict '" + s + "'");
}

bool ViewpointSelection::is_viewpoint(ClusterId c) const {
    return std::find(viewpoint_clusters.begin(), viewpoint_clusters.end(), c) !=
           viewpoint_clusters.end();
}

ViewpointSelection select_viewpoints(const ConductanceProfile& profile, double delta,
                                     std::optional<ClusterId> force_k) {
    if (profile.levels.empty()) throw ParameterError("empty conductance profile");
    if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");

    auto below = [delta](const ProfileLevel& level) {
        return std::count_if(level.clusters.begin(), level.clusters.end(),
                             [delta](const ClusterQuality& q) { return q.conductance <= delta; });
    };

    const ProfileLevel* chosen = nullptr;
    if (force_k) {
        chosen = profile.at(*force_k);
        if (!chosen) throw NotFoundError("k = " + std::to_string(*force_k) + " not in profile");
    } else {
        for (const ProfileLevel& level : profile.levels) {
            if (!chosen || below(level) > below(*chosen) ||
                (below(level) == below(*chosen) && level.k < chosen->k)) {
                chosen = &level;
            }
        }
    }

    ViewpointSelection s;
    s.chosen_k = chosen->k;
    s.delta = delta;
    s.forced = force_k.has_value();
    for (const ClusterQuality& q : chosen->clusters) {
        (q.conductance <= delta ? s.viewpoint_clusters : s.noisy_clusters).push_back(q.cluster);
    }
    s.verdict = s.viewpoint_clusters.size() >= 2 ? Verdict::viewpoints_found
                                                 : Verdict::no_clear_viewpoints;
    return s;
}

}  // namespace vpd
