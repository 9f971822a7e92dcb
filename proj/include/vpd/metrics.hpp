#pragma once

#include <istream>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "vpd/graph.hpp"

namespace vpd {

using UserLabel = std::string;

/// user -> class label
using GroundTruth = std::map<std::string, UserLabel>;

/// Reads `user,label` lines; a first line of exactly "user,label" is a header.
GroundTruth read_ground_truth(std::istream& in);

/// Purity of `clusters` against `classes`; both are label sequences over the
/// same N >= 1 items.
double purity(std::span<const std::size_t> clusters, std::span<const std::size_t> classes);

/// 2 I(X;Y) / (H(X) + H(Y)); 1 when both labelings are constant.
double nmi(std::span<const std::size_t> clusters, std::span<const std::size_t> classes);

struct EvaluationOptions {
    /// Clusters whose members are left out of the evaluation.
    std::set<ClusterId> excluded_clusters;
};

struct EvaluationReport {
    double purity = 0.0;
    double nmi = 0.0;
    std::size_t n_evaluated = 0;
    /// Clustered users without a ground-truth label.
    std::size_t n_unlabeled = 0;
    /// Labeled users missing from the clustering.
    std::size_t n_unclustered = 0;
    std::vector<std::string> warnings;
};

/// Evaluates over users present in both maps. Throws ParameterError when that
/// intersection is empty.
EvaluationReport evaluate(const std::map<std::string, ClusterId>& clustering,
                          const GroundTruth& truth, const EvaluationOptions& options = {});

}  // namespace vpd
