#include "vpd/partitioner.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <tuple>

#include "vpd/error.hpp"

namespace vpd {

namespace {

constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Fisher-Yates over the raw engine output so the order does not depend on
// the standard library's distribution implementation.
std::vector<NodeId> shuffled_nodes(NodeId n, std::uint64_t seed) {
    std::vector<NodeId> order(n);
    for (NodeId i = 0; i < n; ++i) order[i] = i;
    std::mt19937_64 rng(seed);
    for (NodeId i = n; i > 1; --i) {
        NodeId j = static_cast<NodeId>(rng() % i);
        std::swap(order[i - 1], order[j]);
    }
    return order;
}

double total_overload(const std::vector<Weight>& vol, const std::vector<double>& limit) {
    double over = 0.0;
    for (std::size_t c = 0; c < vol.size(); ++c) {
        over += std::max(0.0, static_cast<double>(vol[c]) - limit[c]);
    }
    return over;
}

std::vector<double> bisection_limits(const Graph& g, double eps, double fraction) {
    const double total = static_cast<double>(g.total_node_weight());
    return {(1.0 + eps) * fraction * total, (1.0 + eps) * (1.0 - fraction) * total};
}

// Boundary FM state over a k-way assignment.
class FmRefiner {
public:
    FmRefiner(const Graph& g, std::vector<ClusterId> part, ClusterId k, std::vector<double> limit)
        : g_(g), k_(k), part_(std::move(part)), limit_(std::move(limit)) {}

    std::vector<ClusterId> run(int passes, bool allow_cut_increase) {
        const NodeId n = g_.num_nodes();
        const std::size_t max_stall =
            std::min<std::size_t>(std::max<std::size_t>(n / 100, 15), 100);
        for (int pass = 0; pass < passes; ++pass) {
            rebuild();
            const Weight start_cut = cut_;
            const double start_over = total_overload(vol_, limit_);
            std::pair<double, Weight> best{start_over, start_cut};
            std::size_t best_len = 0;
            std::vector<std::pair<NodeId, ClusterId>> moves;
            std::vector<char> locked(n, 0);
            std::vector<std::uint32_t> version(n, 0);
            std::vector<Heap> heaps(k_);
            for (NodeId u = 0; u < n; ++u) push(heaps, version, u);

            std::size_t stall = 0;
            while (stall <= max_stall) {
                auto pick = next_move(heaps, version, locked);
                if (!pick) break;
                auto [u, target] = *pick;
                const ClusterId from = part_[u];
                apply(u, target);
                locked[u] = 1;
                moves.emplace_back(u, from);
                for (const Neighbor& nb : g_.neighbors(u)) {
                    if (!locked[nb.node]) {
                        ++version[nb.node];
                        push(heaps, version, nb.node);
                    }
                }
                const double over = total_overload(vol_, limit_);
                const bool admissible =
                    over <= start_over && (allow_cut_increase || cut_ <= start_cut);
                std::pair<double, Weight> key{over, cut_};
                if (admissible && key < best) {
                    best = key;
                    best_len = moves.size();
                    stall = 0;
                } else {
                    ++stall;
                }
            }
            for (std::size_t i = moves.size(); i > best_len; --i) {
                part_[moves[i - 1].first] = moves[i - 1].second;
            }
            if (best_len == 0) break;
        }
        return part_;
    }

private:
    struct Entry {
        Weight gain;
        NodeId node;
        std::uint32_t version;
    };
    struct EntryLess {
        bool operator()(const Entry& a, const Entry& b) const {
            return a.gain != b.gain ? a.gain < b.gain : a.node > b.node;
        }
    };
    using Heap = std::priority_queue<Entry, std::vector<Entry>, EntryLess>;

    Weight& conn(NodeId u, ClusterId c) { return conn_[static_cast<std::size_t>(u) * k_ + c]; }

    void rebuild() {
        const NodeId n = g_.num_nodes();
        conn_.assign(static_cast<std::size_t>(n) * k_, 0);
        vol_.assign(k_, 0);
        cut_ = 0;
        for (NodeId u = 0; u < n; ++u) {
            vol_[part_[u]] += g_.node_weight(u);
            for (const Neighbor& nb : g_.neighbors(u)) {
                conn(u, part_[nb.node]) += nb.w;
                if (part_[nb.node] != part_[u] && u < nb.node) cut_ += nb.w;
            }
        }
    }

    // Best conn-gain over adjacent clusters; nullopt for interior nodes.
    std::optional<Weight> best_gain(NodeId u) {
        const ClusterId own = part_[u];
        std::optional<Weight> best;
        for (ClusterId c = 0; c < k_; ++c) {
            if (c == own || conn(u, c) == 0) continue;
            Weight gain = conn(u, c) - conn(u, own);
            if (!best || gain > *best) best = gain;
        }
        return best;
    }

    void push(std::vector<Heap>& heaps, const std::vector<std::uint32_t>& version, NodeId u) {
        if (auto gain = best_gain(u)) heaps[part_[u]].push({*gain, u, version[u]});
    }

    // Target for u: prefer clusters the node fits into, then higher gain,
    // then lower fill ratio, then lower index.
    ClusterId choose_target(NodeId u) {
        const ClusterId own = part_[u];
        ClusterId best = own;
        std::tuple<bool, Weight, double> best_key{};
        for (ClusterId c = 0; c < k_; ++c) {
            if (c == own || conn(u, c) == 0) continue;
            const bool fits = static_cast<double>(vol_[c] + g_.node_weight(u)) <= limit_[c];
            std::tuple<bool, Weight, double> key{fits, conn(u, c) - conn(u, own),
                                                 -fill(c)};
            if (best == own || key > best_key) {
                best = c;
                best_key = key;
            }
        }
        return best;
    }

    double fill(ClusterId c) const {
        return limit_[c] > 0 ? static_cast<double>(vol_[c]) / limit_[c]
                             : std::numeric_limits<double>::infinity();
    }

    const Entry* clean_top(Heap& heap, ClusterId c, const std::vector<std::uint32_t>& version,
                           const std::vector<char>& locked) {
        while (!heap.empty()) {
            const Entry& e = heap.top();
            if (e.version == version[e.node] && !locked[e.node] && part_[e.node] == c) return &e;
            heap.pop();
        }
        return nullptr;
    }

    // Among the best node of each cluster: moves out of an overloaded
    // cluster first, then moves whose target stays within its limit, then
    // the larger gain, then the fuller source.
    std::optional<std::pair<NodeId, ClusterId>> next_move(std::vector<Heap>& heaps,
                                                          const std::vector<std::uint32_t>& version,
                                                          const std::vector<char>& locked) {
        ClusterId source = k_;
        ClusterId target = k_;
        std::tuple<bool, bool, Weight, double> source_key{};
        for (ClusterId c = 0; c < k_; ++c) {
            const Entry* top = clean_top(heaps[c], c, version, locked);
            if (!top) continue;
            const ClusterId t = choose_target(top->node);
            const bool overloaded = static_cast<double>(vol_[c]) > limit_[c];
            const bool fits = static_cast<double>(vol_[t] + g_.node_weight(top->node)) <= limit_[t];
            std::tuple<bool, bool, Weight, double> key{overloaded, fits,
                                                       conn(top->node, t) - conn(top->node, c), fill(c)};
            if (source == k_ || key > source_key) {
                source = c;
                target = t;
                source_key = key;
            }
        }
        if (source == k_) return std::nullopt;
        const NodeId u = heaps[source].top().node;
        heaps[source].pop();
        return std::pair{u, target};
    }

    void apply(NodeId u, ClusterId target) {
        const ClusterId from = part_[u];
        cut_ -= conn(u, target) - conn(u, from);
        vol_[from] -= g_.node_weight(u);
        vol_[target] += g_.node_weight(u);
        part_[u] = target;
        for (const Neighbor& nb : g_.neighbors(u)) {
            conn(nb.node, from) -= nb.w;
            conn(nb.node, target) += nb.w;
        }
    }

    const Graph& g_;
    ClusterId k_;
    std::vector<ClusterId> part_;
    std::vector<double> limit_;
    std::vector<Weight> conn_;
    std::vector<Weight> vol_;
    Weight cut_ = 0;
};

// Grows side 0 from `start`. Frontier priority is conn_in / conn_out with
// conn_out == 0 ranking highest.
std::vector<ClusterId> grow_region(const Graph& g, NodeId start, double target) {
    const NodeId n = g.num_nodes();
    std::vector<ClusterId> side(n, 1);
    std::vector<Weight> conn_in(n, 0);
    std::vector<std::uint32_t> version(n, 0);

    struct Candidate {
        Weight in;
        Weight out;
        NodeId node;
        std::uint32_t version;
    };
    auto worse = [](const Candidate& a, const Candidate& b) {
        // a < b when a's ratio is lower: a.in / a.out < b.in / b.out
        const __int128 lhs = static_cast<__int128>(a.in) * b.out;
        const __int128 rhs = static_cast<__int128>(b.in) * a.out;
        if (lhs != rhs) return lhs < rhs;
        return a.node > b.node;
    };
    std::priority_queue<Candidate, std::vector<Candidate>, decltype(worse)> frontier(worse);

    // Fallback order for jumping to a new component: heaviest first.
    std::vector<NodeId> by_weight(n);
    for (NodeId i = 0; i < n; ++i) by_weight[i] = i;
    std::stable_sort(by_weight.begin(), by_weight.end(), [&](NodeId a, NodeId b) {
        return g.node_weight(a) > g.node_weight(b);
    });
    std::size_t fallback = 0;

    Weight volume = 0;
    NodeId taken = 0;
    NodeId next = start;
    while (next != kNoNode) {
        const NodeId u = next;
        side[u] = 0;
        volume += g.node_weight(u);
        ++taken;
        if (static_cast<double>(volume) >= target || taken + 1 >= n) break;
        for (const Neighbor& nb : g.neighbors(u)) {
            if (side[nb.node] == 0) continue;
            conn_in[nb.node] += nb.w;
            ++version[nb.node];
            frontier.push({conn_in[nb.node], g.weighted_degree(nb.node) - conn_in[nb.node], nb.node,
                           version[nb.node]});
        }
        next = kNoNode;
        while (!frontier.empty()) {
            Candidate c = frontier.top();
            frontier.pop();
            if (side[c.node] == 0 || c.version != version[c.node]) continue;
            next = c.node;
            break;
        }
        if (next == kNoNode) {
            while (fallback < n && side[by_weight[fallback]] == 0) ++fallback;
            if (fallback < n) next = by_weight[fallback];
        }
        if (next != kNoNode) {
            // Stop short when taking the node lands farther from the target.
            const double with = static_cast<double>(volume + g.node_weight(next));
            if (with > target && with - target > target - static_cast<double>(volume)) break;
        }
    }
    return side;
}

void ensure_min_counts(const Graph& g, std::vector<ClusterId>& side, NodeId need0, NodeId need1) {
    for (ClusterId deficient : {ClusterId{0}, ClusterId{1}}) {
        const NodeId need = deficient == 0 ? need0 : need1;
        for (;;) {
            NodeId have = static_cast<NodeId>(std::count(side.begin(), side.end(), deficient));
            if (have >= need) break;
            NodeId best = kNoNode;
            Weight best_gain = 0;
            for (NodeId u = 0; u < g.num_nodes(); ++u) {
                if (side[u] == deficient) continue;
                Weight gain = 0;
                for (const Neighbor& nb : g.neighbors(u)) gain += side[nb.node] == deficient ? nb.w : -nb.w;
                if (best == kNoNode || gain > best_gain) {
                    best = u;
                    best_gain = gain;
                }
            }
            side[best] = deficient;
        }
    }
}

}  // namespace

NodeId PartitionParams::effective_stop_size() const {
    if (coarsen_stop_size != 0) return coarsen_stop_size;
    return std::max<NodeId>(50, 20 * k);
}

void PartitionParams::validate() const {
    if (k < 2) throw ParameterError("k must be >= 2");
    if (!(balance_epsilon >= 0.0)) throw ParameterError("balance_epsilon must be >= 0");
    if (refinement_passes < 0) throw ParameterError("refinement_passes must be >= 0");
    if (initial_restarts < 1) throw ParameterError("initial_restarts must be >= 1");
    if (coarsen_stop_size != 0 && coarsen_stop_size < k) {
        throw ParameterError("coarsen_stop_size must be >= k");
    }
}

std::vector<NodeId> CoarseGraph::members(NodeId c) const {
    std::vector<NodeId> out;
    for (NodeId u = 0; u < fine_to_coarse.size(); ++u) {
        if (fine_to_coarse[u] == c) out.push_back(u);
    }
    return out;
}

CoarseGraph coarsen_level(const Graph& graph, std::uint64_t seed, Weight max_node_weight) {
    const NodeId n = graph.num_nodes();
    std::vector<Weight> heaviest(n, 0);
    for (NodeId u = 0; u < n; ++u) {
        for (const Neighbor& nb : graph.neighbors(u)) heaviest[u] = std::max(heaviest[u], nb.w);
    }
    std::vector<NodeId> order = shuffled_nodes(n, seed);
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeId a, NodeId b) { return heaviest[a] > heaviest[b]; });

    std::vector<NodeId> mate(n, kNoNode);
    for (NodeId u : order) {
        if (mate[u] != kNoNode) continue;
        NodeId best = kNoNode;
        Weight best_w = 0;
        for (const Neighbor& nb : graph.neighbors(u)) {
            if (mate[nb.node] != kNoNode) continue;
            if (graph.node_weight(u) + graph.node_weight(nb.node) > max_node_weight) continue;
            if (nb.w > best_w || (nb.w == best_w && nb.node < best)) {
                best = nb.node;
                best_w = nb.w;
            }
        }
        if (best == kNoNode) {
            mate[u] = u;
        } else {
            mate[u] = best;
            mate[best] = u;
        }
    }

    CoarseGraph out;
    out.fine_to_coarse.assign(n, kNoNode);
    std::vector<Weight> weights;
    for (NodeId u = 0; u < n; ++u) {
        if (out.fine_to_coarse[u] != kNoNode) continue;
        const NodeId c = static_cast<NodeId>(weights.size());
        out.fine_to_coarse[u] = c;
        Weight w = graph.node_weight(u);
        if (mate[u] != u) {
            out.fine_to_coarse[mate[u]] = c;
            w += graph.node_weight(mate[u]);
        }
        weights.push_back(w);
    }
    std::vector<Edge> edges;
    for (const Edge& e : graph.edges()) {
        const NodeId cu = out.fine_to_coarse[e.u];
        const NodeId cv = out.fine_to_coarse[e.v];
        if (cu == cv) {
            out.collapsed_weight += e.w;
        } else {
            edges.push_back({cu, cv, e.w});
        }
    }
    const auto coarse_n = static_cast<NodeId>(weights.size());
    out.graph = Graph::from_edges(coarse_n, edges, std::move(weights));
    return out;
}

Partition initial_bisection(const Graph& graph, const PartitionParams& params,
                            double target_fraction) {
    const NodeId n = graph.num_nodes();
    Partition best{2, std::vector<ClusterId>(n, 0)};
    if (n < 2) return best;

    const double target = target_fraction * static_cast<double>(graph.total_node_weight());
    const auto limits = bisection_limits(graph, params.balance_epsilon, target_fraction);
    const std::vector<NodeId> starts = shuffled_nodes(n, mix_seed(params.seed, 0x1b));
    const int restarts = std::min<int>(params.initial_restarts, static_cast<int>(n));

    std::pair<double, Weight> best_key{std::numeric_limits<double>::infinity(), 0};
    for (int r = 0; r < restarts; ++r) {
        Partition p{2, grow_region(graph, starts[r], target)};
        const std::vector<Weight> vol = cluster_volumes(graph, p);
        std::pair<double, Weight> key{total_overload(vol, limits), edge_cut(graph, p)};
        if (key < best_key) {
            best_key = key;
            best = std::move(p);
        }
    }
    return best;
}

Partition refine_with_limits(const Graph& graph, const Partition& partition,
                             const std::vector<double>& max_volume, int passes,
                             bool allow_cut_increase) {
    if (partition.assignment.size() != graph.num_nodes()) {
        throw ParameterError("partition does not cover the graph");
    }
    if (max_volume.size() != partition.k) throw ParameterError("one volume limit per cluster");
    FmRefiner fm(graph, partition.assignment, partition.k, max_volume);
    return {partition.k, fm.run(passes, allow_cut_increase)};
}

Partition refine(const Graph& graph, const Partition& partition, const PartitionParams& params) {
    const double bound = (1.0 + params.balance_epsilon) *
                         static_cast<double>(graph.total_node_weight()) / partition.k;
    return refine_with_limits(graph, partition, std::vector<double>(partition.k, bound),
                              params.refinement_passes, false);
}

Partition multilevel_bisect(const Graph& graph, const PartitionParams& params,
                            double target_fraction) {
    if (graph.num_nodes() < 2) throw ParameterError("bisection needs at least 2 nodes");
    const NodeId stop = params.effective_stop_size();
    const Weight max_node_weight = std::max<Weight>(
        1, static_cast<Weight>(1.5 * static_cast<double>(graph.total_node_weight()) / stop));

    std::vector<CoarseGraph> levels;
    const Graph* current = &graph;
    while (current->num_nodes() > stop) {
        CoarseGraph next =
            coarsen_level(*current, mix_seed(params.seed, levels.size() + 1), max_node_weight);
        const NodeId before = current->num_nodes();
        const NodeId after = next.graph.num_nodes();
        if (after >= before || after < 2) break;
        levels.push_back(std::move(next));
        current = &levels.back().graph;
        if (after > before - before / 20) break;  // matching stalled (< 5% reduction)
    }

    const auto limits = bisection_limits(graph, params.balance_epsilon, target_fraction);
    Partition p = initial_bisection(*current, params, target_fraction);
    p = refine_with_limits(*current, p, limits, params.refinement_passes, true);
    for (std::size_t level = levels.size(); level-- > 0;) {
        const Graph& finer = level == 0 ? graph : levels[level - 1].graph;
        const auto& map = levels[level].fine_to_coarse;
        Partition projected{2, std::vector<ClusterId>(finer.num_nodes())};
        for (NodeId u = 0; u < finer.num_nodes(); ++u) projected.assignment[u] = p.assignment[map[u]];
        p = refine_with_limits(finer, projected, limits, params.refinement_passes, true);
    }
    return p;
}

namespace {

void bisect_recursive(const Graph& root, const std::vector<NodeId>& nodes, ClusterId k,
                      ClusterId first, std::uint64_t seed, const PartitionParams& params,
                      std::vector<ClusterId>& out) {
    if (k == 1) {
        for (NodeId u : nodes) out[u] = first;
        return;
    }
    const ClusterId k0 = (k + 1) / 2;
    const ClusterId k1 = k - k0;
    const bool whole = nodes.size() == root.num_nodes();
    Graph local;
    if (!whole) local = root.induced(nodes);
    const Graph& g = whole ? root : local;

    PartitionParams sub = params;
    sub.seed = seed;
    Partition p = multilevel_bisect(g, sub, static_cast<double>(k0) / k);
    ensure_min_counts(g, p.assignment, k0, k1);

    std::vector<NodeId> side0;
    std::vector<NodeId> side1;
    for (NodeId i = 0; i < nodes.size(); ++i) {
        (p.assignment[i] == 0 ? side0 : side1).push_back(nodes[i]);
    }
    bisect_recursive(root, side0, k0, first, mix_seed(seed, 2 * k + 0), params, out);
    bisect_recursive(root, side1, k1, first + k0, mix_seed(seed, 2 * k + 1), params, out);
}

// Fills empty clusters by moving in the node whose departure adds the least
// cut weight, taken from clusters with more than one member.
void repair_empty(const Graph& g, Partition& p) {
    std::vector<std::size_t> size(p.k, 0);
    for (ClusterId c : p.assignment) ++size[c];
    for (ClusterId empty = 0; empty < p.k; ++empty) {
        if (size[empty] != 0) continue;
        NodeId best = kNoNode;
        Weight best_damage = 0;
        for (NodeId u = 0; u < g.num_nodes(); ++u) {
            if (size[p.assignment[u]] < 2) continue;
            Weight damage = 0;
            for (const Neighbor& nb : g.neighbors(u)) {
                if (p.assignment[nb.node] == p.assignment[u]) damage += nb.w;
            }
            if (best == kNoNode || damage < best_damage) {
                best = u;
                best_damage = damage;
            }
        }
        if (best == kNoNode) break;
        --size[p.assignment[best]];
        p.assignment[best] = empty;
        ++size[empty];
    }
}

}  // namespace

KwayResult kway_partition(const Graph& graph, const PartitionParams& params) {
    params.validate();
    const NodeId n = graph.num_nodes();
    if (params.k > n) {
        throw ParameterError("k = " + std::to_string(params.k) + " exceeds node count " +
                             std::to_string(n));
    }
    KwayResult result;
    result.partition.k = params.k;
    result.partition.assignment.assign(n, 0);
    if (params.k == n) {
        for (NodeId u = 0; u < n; ++u) result.partition.assignment[u] = u;
    } else {
        std::vector<NodeId> all(n);
        for (NodeId u = 0; u < n; ++u) all[u] = u;
        bisect_recursive(graph, all, params.k, 0, params.seed, params, result.partition.assignment);
        repair_empty(graph, result.partition);
    }
    result.edge_cut = edge_cut(graph, result.partition);
    result.balance_achieved = imbalance(graph, result.partition);
    return result;
}

Weight edge_cut(const Graph& graph, const Partition& partition) {
    Weight cut = 0;
    for (NodeId u = 0; u < graph.num_nodes(); ++u) {
        for (const Neighbor& nb : graph.neighbors(u)) {
            if (u < nb.node && partition.assignment[u] != partition.assignment[nb.node]) cut += nb.w;
        }
    }
    return cut;
}

std::vector<Weight> cluster_volumes(const Graph& graph, const Partition& partition) {
    std::vector<Weight> vol(partition.k, 0);
    for (NodeId u = 0; u < graph.num_nodes(); ++u) vol[partition.assignment[u]] += graph.node_weight(u);
    return vol;
}

double imbalance(const Graph& graph, const Partition& partition) {
    if (graph.total_node_weight() == 0 || partition.k == 0) return 0.0;
    const auto vol = cluster_volumes(graph, partition);
    const double ideal = static_cast<double>(graph.total_node_weight()) / partition.k;
    return static_cast<double>(*std::max_element(vol.begin(), vol.end())) / ideal - 1.0;
}

}  // namespace vpd
