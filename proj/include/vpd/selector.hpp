#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vpd/graph.hpp"
#include "vpd/partitioner.hpp"

namespace vpd {

struct ClusterQuality {
    ClusterId cluster = 0;
    std::size_t size = 0;
    Weight volume = 0;
    Weight cut_weight = 0;
    double conductance = 0.0;

    bool operator==(const ClusterQuality&) const = default;
};

/// Weighted degree sum of `cluster`; internal edges count once per endpoint.
Weight volume(const Graph& graph, std::span<const NodeId> cluster);

/// Weight of edges with exactly one endpoint in `cluster`.
Weight cut_weight(const Graph& graph, std::span<const NodeId> cluster);

/// cut / min(volume, complement volume), 0 when that minimum is 0.
/// Throws ParameterError for an empty cluster or an empty complement.
double conductance(const Graph& graph, std::span<const NodeId> cluster);

/// Quality of every cluster of `partition` in one sweep over the edges.
std::vector<ClusterQuality> cluster_qualities(const Graph& graph, const Partition& partition);

struct ProfileLevel {
    ClusterId k = 0;
    KwayResult result;
    std::vector<ClusterQuality> clusters;
};

/// Partitions and cluster qualities for every k in [2, k_max].
struct ConductanceProfile {
    std::vector<ProfileLevel> levels;

    const ProfileLevel* at(ClusterId k) const;
};

/// Runs kway_partition for k = 2..k_max (concurrently, one task per k) with
/// the same seed. params.k is ignored.
ConductanceProfile profile(const Graph& graph, ClusterId k_max, const PartitionParams& params);

enum class Verdict { viewpoints_found, no_clear_viewpoints };

std::string to_string(Verdict v);
Verdict parse_verdict(const std::string& s);

struct ViewpointSelection {
    ClusterId chosen_k = 0;
    double delta = 0.10;
    std::vector<ClusterId> viewpoint_clusters;
    std::vector<ClusterId> noisy_clusters;
    Verdict verdict = Verdict::no_clear_viewpoints;
    bool forced = false;

    bool is_viewpoint(ClusterId c) const;
    bool operator==(const ViewpointSelection&) const = default;
};

/// Picks the k with the most clusters at or below `delta` (smaller k on
/// ties). `force_k` overrides the choice of k but not the threshold split.
ViewpointSelection select_viewpoints(const ConductanceProfile& profile, double delta,
                                     std::optional<ClusterId> force_k = std::nullopt);

}  // namespace vpd
