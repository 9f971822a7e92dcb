#include "vpd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "vpd/error.hpp"

namespace vpd {

namespace {

struct Contingency {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> joint;
    std::map<std::size_t, std::size_t> rows;
    std::map<std::size_t, std::size_t> cols;
    std::size_t total = 0;
};

Contingency tabulate(std::span<const std::size_t> a, std::span<const std::size_t> b) {
    if (a.size() != b.size()) throw ParameterError("labelings differ in length");
    if (a.empty()) throw ParameterError("cannot evaluate an empty labeling");
    Contingency t;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++t.joint[{a[i], b[i]}];
        ++t.rows[a[i]];
        ++t.cols[b[i]];
    }
    t.total = a.size();
    return t;
}

double entropy(const std::map<std::size_t, std::size_t>& counts, double total) {
    double h = 0.0;
    for (const auto& [label, c] : counts) {
        const double p = static_cast<double>(c) / total;
        h -= p * std::log(p);
    }
    return h;
}

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

GroundTruth read_ground_truth(std::istream& in) {
    GroundTruth truth;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        line = trim(line);
        if (line.empty()) continue;
        if (number == 1 && line == "user,label") continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw InputError("truth line " + std::to_string(number) + ": expected user,label");
        }
        std::string user = trim(line.substr(0, comma));
        std::string label = trim(line.substr(comma + 1));
        if (user.empty() || label.empty()) {
            throw InputError("truth line " + std::to_string(number) + ": empty user or label");
        }
        auto [it, inserted] = truth.emplace(user, label);
        if (!inserted && it->second != label) {
            throw InputError("truth line " + std::to_string(number) + ": user '" + user +
                             "' has two labels");
        }
    }
    return truth;
}

double purity(std::span<const std::size_t> clusters, std::span<const std::size_t> classes) {
    const Contingency t = tabulate(clusters, classes);
    std::map<std::size_t, std::size_t> best;
    for (const auto& [cell, count] : t.joint) {
        best[cell.first] = std::max(best[cell.first], count);
    }
    std::size_t hits = 0;
    for (const auto& [cluster, count] : best) hits += count;
    return static_cast<double>(hits) / static_cast<double>(t.total);
}

double nmi(std::span<const std::size_t> clusters, std::span<const std::size_t> classes) {
    const Contingency t = tabulate(clusters, classes);
    const double n = static_cast<double>(t.total);
    const double h_rows = entropy(t.rows, n);
    const double h_cols = entropy(t.cols, n);
    if (t.rows.size() == 1 && t.cols.size() == 1) return 1.0;
    double mi = 0.0;
    for (const auto& [cell, count] : t.joint) {
        const double pij = static_cast<double>(count) / n;
        const double pi = static_cast<double>(t.rows.at(cell.first)) / n;
        const double pj = static_cast<double>(t.cols.at(cell.second)) / n;
        mi += pij * std::log(pij / (pi * pj));
    }
    return std::clamp(2.0 * mi / (h_rows + h_cols), 0.0, 1.0);
}

EvaluationReport evaluate(const std::map<std::string, ClusterId>& clustering,
                          const GroundTruth& truth, const EvaluationOptions& options) {
    EvaluationReport report;
    std::map<UserLabel, std::size_t> class_ids;
    std::vector<std::size_t> clusters;
    std::vector<std::size_t> classes;
    for (const auto& [user, cluster] : clustering) {
        if (options.excluded_clusters.contains(cluster)) continue;
        auto it = truth.find(user);
        if (it == truth.end()) {
            ++report.n_unlabeled;
            continue;
        }
        auto [cls, inserted] = class_ids.emplace(it->second, class_ids.size());
        clusters.push_back(cluster);
        classes.push_back(cls->second);
    }
    for (const auto& [user, label] : truth) {
        if (!clustering.contains(user)) ++report.n_unclustered;
    }
    if (clusters.empty()) {
        throw ParameterError("no user is both clustered and labeled");
    }
    report.n_evaluated = clusters.size();
    report.purity = purity(clusters, classes);
    report.nmi = nmi(clusters, classes);

    std::set<std::size_t> distinct(clusters.begin(), clusters.end());
    if (distinct.size() == clusters.size() && clusters.size() > 1) {
        report.warnings.push_back("every evaluated user is in its own cluster; purity is trivially 1");
    }
    return report;
}

}  // namespace vpd
