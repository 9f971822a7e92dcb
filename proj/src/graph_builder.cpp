#include "vpd/graph_builder.hpp"

#include <algorithm>
#include <iomanip>
#include <map>

#include <json.hpp>

#include "vpd/error.hpp"

namespace vpd {

using nlohmann::json;

std::string to_string(InteractionKind kind) {
    switch (kind) {
        case InteractionKind::retweet: return "retweet";
        case InteractionKind::like: return "like";
        case InteractionKind::reply: return "reply";
        case InteractionKind::other: return "other";
    }
    return "other";
}

InteractionKind parse_interaction_kind(const std::string& name) {
    if (name == "retweet") return InteractionKind::retweet;
    if (name == "like") return InteractionKind::like;
    if (name == "reply") return InteractionKind::reply;
    if (name == "other") return InteractionKind::other;
    throw ParameterError("unknown interaction kind '" + name + "'");
}

namespace {

std::string required_string(const json& obj, const char* key, bool allow_empty) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        throw InputError(std::string("missing field '") + key + "'");
    }
    if (!it->is_string()) {
        throw InputError(std::string("field '") + key + "' is not a string");
    }
    std::string value = it->get<std::string>();
    if (!allow_empty && value.empty()) {
        throw InputError(std::string("field '") + key + "' is empty");
    }
    return value;
}

// Runs `parse` on every non-blank line, routing failures through the
// malformed-line policy.
template <typename Fn>
void for_each_line(std::istream& in, const IngestOptions& options,
                   std::vector<LineError>& errors, Fn&& parse) {
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            json obj = json::parse(line);
            if (!obj.is_object()) throw InputError("record is not a JSON object");
            parse(obj);
        } catch (const std::exception& e) {
            std::string message = "line " + std::to_string(number) + ": " + e.what();
            if (options.on_malformed == OnMalformed::abort) throw InputError(message);
            errors.push_back({number, message});
        }
    }
}

}  // namespace

const Post* PostCollection::find(const std::string& post_id) const {
    auto it = index_.find(post_id);
    return it == index_.end() ? nullptr : &posts_[it->second];
}

PostCollection ingest_posts(std::istream& in, const IngestOptions& options) {
    PostCollection out;
    for_each_line(in, options, out.errors, [&](const json& obj) {
        Post post{required_string(obj, "post_id", false), required_string(obj, "author", false),
                  required_string(obj, "text", true)};
        auto [it, inserted] = out.index_.emplace(post.post_id, out.posts_.size());
        if (inserted) {
            out.posts_.push_back(std::move(post));
        } else if (out.posts_[it->second] == post) {
            ++out.duplicates;
        } else {
            throw InputError("post_id '" + post.post_id + "' repeated with different content");
        }
    });
    return out;
}

InteractionSet ingest_interactions(std::istream& in, const IngestOptions& options,
                                   const PostCollection* posts) {
    InteractionSet out;
    for_each_line(in, options, out.errors, [&](const json& obj) {
        InteractionRecord rec;
        rec.sender = required_string(obj, "sender", false);
        rec.post_id = required_string(obj, "post_id", false);
        rec.receiver = required_string(obj, "receiver", false);
        auto kind = obj.find("kind");
        if (kind != obj.end() && !kind->is_null()) {
            if (!kind->is_string()) throw InputError("field 'kind' is not a string");
            try {
                rec.kind = parse_interaction_kind(kind->get<std::string>());
            } catch (const ParameterError&) {
                rec.kind = InteractionKind::other;
            }
        }
        if (rec.sender == rec.receiver) {
            ++out.self_interactions_dropped;
            return;
        }
        if (posts != nullptr && posts->find(rec.post_id) == nullptr) {
            rec.known_post = false;
            ++out.unknown_post_records;
        }
        out.records.push_back(std::move(rec));
    });
    return out;
}

InteractionGraph::InteractionGraph(std::vector<UserId> users, Graph graph, int min_endorsements,
                                   std::vector<UserId> excluded_users)
    : users_(std::move(users)),
      graph_(std::move(graph)),
      min_endorsements_(min_endorsements),
      excluded_(std::move(excluded_users)) {
    for (NodeId i = 0; i < users_.size(); ++i) index_.emplace(users_[i], i);
}

std::optional<NodeId> InteractionGraph::node_of(const UserId& user) const {
    auto it = index_.find(user);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Weight InteractionGraph::weight(const UserId& a, const UserId& b) const {
    auto u = node_of(a);
    auto v = node_of(b);
    if (!u || !v) return 0;
    return graph_.edge_weight(*u, *v);
}

InteractionGraph build_graph(const std::vector<InteractionRecord>& interactions,
                             const BuildOptions& options) {
    if (options.min_endorsements < 1) {
        throw ParameterError("min_endorsements must be >= 1");
    }
    std::map<std::pair<UserId, UserId>, Weight> counts;
    std::set<UserId> seen;
    for (const InteractionRecord& rec : interactions) {
        if (rec.sender == rec.receiver) continue;
        if (!options.kinds.empty() && !options.kinds.contains(rec.kind)) continue;
        seen.insert(rec.sender);
        seen.insert(rec.receiver);
        auto key = std::minmax(rec.sender, rec.receiver);
        ++counts[{key.first, key.second}];
    }

    std::set<UserId> kept;
    for (const auto& [pair, count] : counts) {
        if (count >= options.min_endorsements) {
            kept.insert(pair.first);
            kept.insert(pair.second);
        }
    }
    std::vector<UserId> users(kept.begin(), kept.end());
    std::unordered_map<UserId, NodeId> index;
    for (NodeId i = 0; i < users.size(); ++i) index.emplace(users[i], i);

    std::vector<Edge> edges;
    for (const auto& [pair, count] : counts) {
        if (count >= options.min_endorsements) {
            edges.push_back({index.at(pair.first), index.at(pair.second), count});
        }
    }
    std::vector<UserId> excluded;
    std::set_difference(seen.begin(), seen.end(), kept.begin(), kept.end(),
                        std::back_inserter(excluded));

    Graph g = Graph::from_edges(static_cast<NodeId>(users.size()), edges);
    return InteractionGraph(std::move(users), std::move(g), options.min_endorsements,
                            std::move(excluded));
}

GraphStats graph_stats(const Graph& graph) {
    GraphStats s;
    s.nodes = graph.num_nodes();
    s.edges = graph.num_edges();
    for (NodeId u = 0; u < graph.num_nodes(); ++u) s.total_volume += graph.weighted_degree(u);
    s.component_sizes = component_sizes(graph);
    return s;
}

void write_graph_json(std::ostream& out, const InteractionGraph& graph) {
    json doc;
    doc["min_endorsements"] = graph.min_endorsements();
    doc["nodes"] = graph.users();
    json edges = json::array();
    for (const Edge& e : graph.graph().edges()) {
        edges.push_back({{"u", graph.users()[e.u]}, {"v", graph.users()[e.v]}, {"w", e.w}});
    }
    doc["edges"] = std::move(edges);
    doc["excluded_users"] = graph.excluded_users().size();
    out << doc.dump(2) << '\n';
}

InteractionGraph read_graph_json(std::istream& in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw InputError(std::string("graph json: ") + e.what());
    }
    try {
        auto users = doc.at("nodes").get<std::vector<UserId>>();
        std::unordered_map<UserId, NodeId> index;
        for (NodeId i = 0; i < users.size(); ++i) index.emplace(users[i], i);
        std::vector<Edge> edges;
        for (const json& e : doc.at("edges")) {
            edges.push_back({index.at(e.at("u").get<UserId>()), index.at(e.at("v").get<UserId>()),
                             e.at("w").get<Weight>()});
        }
        Graph g = Graph::from_edges(static_cast<NodeId>(users.size()), edges);
        return InteractionGraph(std::move(users), std::move(g), doc.value("min_endorsements", 1), {});
    } catch (const std::exception& e) {
        throw InputError(std::string("graph json: ") + e.what());
    }
}

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

void write_graphml(std::ostream& out, const InteractionGraph& graph,
                   const std::vector<ClusterId>* assignment) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
           "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n";
    if (assignment) {
        out << "  <key id=\"cluster\" for=\"node\" attr.name=\"cluster\" attr.type=\"int\"/>\n";
    }
    out << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
    const auto& users = graph.users();
    for (NodeId i = 0; i < users.size(); ++i) {
        out << "    <node id=\"" << xml_escape(users[i]) << "\"";
        if (assignment) {
            out << "><data key=\"cluster\">" << (*assignment)[i] << "</data></node>\n";
        } else {
            out << "/>\n";
        }
    }
    std::size_t id = 0;
    for (const Edge& e : graph.graph().edges()) {
        out << "    <edge id=\"e" << id++ << "\" source=\"" << xml_escape(users[e.u])
            << "\" target=\"" << xml_escape(users[e.v]) << "\"><data key=\"weight\">" << e.w
            << "</data></edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
}

}  // namespace vpd
