#include "vpd/server.hpp"

#include <algorithm>
#include <charconv>

#include <httplib.h>

#include "vpd/error.hpp"

namespace vpd {

using nlohmann::json;

namespace {

ApiResponse ok(const json& j) { return {200, j.dump()}; }

ApiResponse error(int status, const std::string& message) {
    return {status, json{{"error", message}}.dump()};
}

std::optional<std::size_t> parse_count(const std::string& s) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

// Splits "/api/viewpoints/3/terms" into its segments.
std::vector<std::string> segments(std::string_view path) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < path.size()) {
        if (path[pos] == '/') {
            ++pos;
            continue;
        }
        std::size_t end = path.find('/', pos);
        if (end == std::string_view::npos) end = path.size();
        out.emplace_back(path.substr(pos, end - pos));
        pos = end;
    }
    return out;
}

}  // namespace

ApiService::ApiService(Snapshot snapshot) : snapshot_(std::move(snapshot)) {}

ApiResponse ApiService::get(std::string_view path,
                            const std::map<std::string, std::string>& query) const {
    const auto seg = segments(path);
    if (seg.size() < 2 || seg[0] != "api") return error(404, "unknown endpoint");
    if (seg.size() == 2 && seg[1] == "meta") return meta();
    if (seg.size() == 2 && seg[1] == "sweep") return sweep();
    if (seg.size() == 2 && seg[1] == "selection") return selection();
    if (seg.size() == 3 && seg[1] == "partition") return partition(seg[2]);
    if (seg.size() == 4 && seg[1] == "viewpoints" && seg[3] == "terms") {
        return viewpoint_terms(seg[2], query);
    }
    if (seg.size() == 3 && seg[1] == "graph" && seg[2] == "sample") return graph_sample(query);
    return error(404, "unknown endpoint");
}

ApiResponse ApiService::post(std::string_view path, std::string_view body) const {
    const auto seg = segments(path);
    if (seg.size() == 4 && seg[0] == "api" && seg[1] == "viewpoints" && seg[3] == "drill") {
        return drill(seg[2], body);
    }
    return error(404, "unknown endpoint");
}

ApiResponse ApiService::meta() const {
    return ok({{"manifest", snapshot_.manifest},
               {"stats", snapshot_.stats},
               {"chosen_k", snapshot_.selection.chosen_k},
               {"verdict", to_string(snapshot_.selection.verdict)},
               {"available_k", [&] {
                    json ks = json::array();
                    for (const auto& [k, p] : snapshot_.partitions) ks.push_back(k);
                    return ks;
                }()},
               {"drill_enabled", snapshot_.corpus.has_value()}});
}

ApiResponse ApiService::sweep() const {
    json rows = json::array();
    for (const SweepRow& r : snapshot_.sweep) rows.push_back(to_json(r));
    return ok({{"delta", snapshot_.selection.delta}, {"rows", std::move(rows)}});
}

ApiResponse ApiService::partition(const std::string& k) const {
    auto value = parse_count(k);
    if (!value) return error(404, "unknown k '" + k + "'");
    auto it = snapshot_.partitions.find(static_cast<ClusterId>(*value));
    if (it == snapshot_.partitions.end()) return error(404, "no partition for k = " + k);
    return ok(it->second);
}

ApiResponse ApiService::selection() const { return ok(to_json(snapshot_.selection)); }

ApiResponse ApiService::viewpoint_terms(const std::string& viewpoint,
                                        const std::map<std::string, std::string>& query) const {
    auto v = parse_count(viewpoint);
    if (!v) return error(404, "unknown viewpoint '" + viewpoint + "'");
    auto it = snapshot_.viewpoint_terms.find(static_cast<ClusterId>(*v));
    if (it == snapshot_.viewpoint_terms.end()) return error(404, "no terms for viewpoint " + viewpoint);
    std::size_t m = snapshot_.manifest.at("config").value("m_terms", std::size_t{10});
    if (auto q = query.find("m"); q != query.end()) {
        auto parsed = parse_count(q->second);
        if (!parsed || *parsed < 1) return error(422, "m must be a positive integer");
        m = *parsed;
    }
    return ok(terms_response(it->first, it->second, m));
}

ApiResponse ApiService::graph_sample(const std::map<std::string, std::string>& query) const {
    std::size_t max_nodes = kDefaultSampleNodes;
    if (auto q = query.find("max_nodes"); q != query.end()) {
        auto parsed = parse_count(q->second);
        if (!parsed || *parsed < 1) return error(422, "max_nodes must be a positive integer");
        max_nodes = *parsed;
    }
    ClusterId k = snapshot_.selection.chosen_k;
    if (auto q = query.find("k"); q != query.end()) {
        auto parsed = parse_count(q->second);
        if (!parsed) return error(422, "k must be a positive integer");
        k = static_cast<ClusterId>(*parsed);
    }
    auto part = snapshot_.partitions.find(k);
    if (part == snapshot_.partitions.end()) return error(404, "no partition for k = " + std::to_string(k));

    const Graph& g = snapshot_.graph.graph();
    const auto& users = snapshot_.graph.users();
    std::vector<NodeId> order(g.num_nodes());
    for (NodeId u = 0; u < g.num_nodes(); ++u) order[u] = u;
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        return g.weighted_degree(a) > g.weighted_degree(b);
    });
    order.resize(std::min<std::size_t>(max_nodes, order.size()));
    std::sort(order.begin(), order.end());
    std::vector<char> keep(g.num_nodes(), 0);
    for (NodeId u : order) keep[u] = 1;

    const json& assignment = part->second.at("assignment");
    const bool noisy_k = k == snapshot_.selection.chosen_k;
    json nodes = json::array();
    for (NodeId u : order) {
        const ClusterId c = assignment.at(users[u]).get<ClusterId>();
        const bool noisy = noisy_k && std::find(snapshot_.selection.noisy_clusters.begin(),
                                                snapshot_.selection.noisy_clusters.end(),
                                                c) != snapshot_.selection.noisy_clusters.end();
        nodes.push_back({{"id", users[u]}, {"degree", g.weighted_degree(u)}, {"cluster", c}, {"noisy", noisy}});
    }
    json edges = json::array();
    for (NodeId u : order) {
        for (const Neighbor& nb : g.neighbors(u)) {
            if (u < nb.node && keep[nb.node]) {
                edges.push_back({{"u", users[u]}, {"v", users[nb.node]}, {"w", nb.w}});
            }
        }
    }
    return ok({{"k", k},
               {"total_nodes", g.num_nodes()},
               {"nodes", std::move(nodes)},
               {"edges", std::move(edges)}});
}

ApiResponse ApiService::drill(const std::string& viewpoint, std::string_view body) const {
    auto v = parse_count(viewpoint);
    if (!v || !snapshot_.selection.is_viewpoint(static_cast<ClusterId>(*v))) {
        return error(404, "unknown viewpoint '" + viewpoint + "'");
    }
    if (!snapshot_.corpus) return error(404, "snapshot has no corpus; drilldown unavailable");

    json req = json::parse(body, nullptr, false);
    if (req.is_discarded() || !req.is_object()) return error(422, "body must be a JSON object");
    auto terms_it = req.find("terms");
    if (terms_it == req.end() || !terms_it->is_array() || terms_it->empty()) {
        return error(422, "terms must be a non-empty array of strings");
    }
    std::vector<std::string> terms;
    for (const json& t : *terms_it) {
        if (!t.is_string() || t.get<std::string>().empty()) {
            return error(422, "terms must be a non-empty array of strings");
        }
        terms.push_back(t.get<std::string>());
    }
    IrdParams params = snapshot_.drill_defaults;
    for (auto [key, target] : {std::pair{"n", &params.n}, std::pair{"m", &params.m}}) {
        auto it = req.find(key);
        if (it == req.end() || it->is_null()) continue;
        if (!it->is_number_integer() || it->get<long long>() < 1) {
            return error(422, std::string(key) + " must be a positive integer");
        }
        *target = it->get<std::size_t>();
    }
    try {
        return ok(drilldown_to_json(
            drill_terms(*snapshot_.corpus, static_cast<ClusterId>(*v), terms, params), params));
    } catch (const DegenerateSplitError& e) {
        return error(409, e.what());
    } catch (const ParameterError& e) {
        return error(422, e.what());
    } catch (const NotFoundError& e) {
        return error(404, e.what());
    }
}

ApiServer::ApiServer(const ApiService& service, ServerOptions options)
    : service_(service), http_(std::make_unique<httplib::Server>()) {
    auto to_query = [](const httplib::Request& req) {
        std::map<std::string, std::string> q;
        for (const auto& [k, v] : req.params) q.emplace(k, v);
        return q;
    };
    auto reply = [](httplib::Response& res, const ApiResponse& r) {
        res.status = r.status;
        res.set_content(r.body, "application/json");
    };
    http_->Get(R"(/api/.*)", [this, to_query, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, service_.get(req.path, to_query(req)));
    });
    http_->Post(R"(/api/.*)", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, service_.post(req.path, req.body));
    });
    if (options.allow_any_origin) {
        http_->set_default_headers({{"Access-Control-Allow-Origin", "*"}});
        http_->Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
            res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
            res.set_header("Access-Control-Allow-Headers", "Content-Type");
            res.status = 204;
        });
    }
    if (!options.static_dir.empty() && !http_->set_mount_point("/", options.static_dir)) {
        throw InputError("cannot serve static files from " + options.static_dir);
    }
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& host, int port) {
    if (port == 0) return http_->bind_to_any_port(host);
    return http_->bind_to_port(host, port) ? port : -1;
}

bool ApiServer::listen() { return http_->listen_after_bind(); }

void ApiServer::stop() {
    if (http_) http_->stop();
}

bool ApiServer::running() const { return http_->is_running(); }

}  // namespace vpd
