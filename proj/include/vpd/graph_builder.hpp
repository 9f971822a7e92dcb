#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "vpd/graph.hpp"

namespace vpd {

using UserId = std::string;

struct Post {
    std::string post_id;
    UserId author;
    std::string text;

    bool operator==(const Post&) const = default;
};

enum class InteractionKind { retweet, like, reply, other };

std::string to_string(InteractionKind kind);
/// Throws ParameterError for unknown names.
InteractionKind parse_interaction_kind(const std::string& name);

struct InteractionRecord {
    UserId sender;
    std::string post_id;
    UserId receiver;
    InteractionKind kind = InteractionKind::other;
    /// False when post_id does not resolve to an ingested post. Such records
    /// still contribute edges but never text.
    bool known_post = true;
};

enum class OnMalformed { abort, skip };

struct IngestOptions {
    OnMalformed on_malformed = OnMalformed::abort;
};

/// One rejected input line (kept when OnMalformed::skip).
struct LineError {
    std::size_t line = 0;
    std::string message;
};

class PostCollection {
public:
    const std::vector<Post>& posts() const noexcept { return posts_; }
    const Post* find(const std::string& post_id) const;
    std::size_t size() const noexcept { return posts_.size(); }

    std::size_t duplicates = 0;
    std::vector<LineError> errors;

private:
    friend PostCollection ingest_posts(std::istream&, const IngestOptions&);
    std::vector<Post> posts_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct InteractionSet {
    std::vector<InteractionRecord> records;
    std::size_t self_interactions_dropped = 0;
    std::size_t unknown_post_records = 0;
    std::vector<LineError> errors;
};

/// Reads posts.jsonl. Repeating a post_id with identical content is a no-op;
/// repeating it with different content is a line error.
PostCollection ingest_posts(std::istream& in, const IngestOptions& options = {});

/// Reads interactions.jsonl. When `posts` is given, records whose post_id is
/// not among them are flagged (known_post = false) and counted.
InteractionSet ingest_interactions(std::istream& in, const IngestOptions& options = {},
                                   const PostCollection* posts = nullptr);

struct BuildOptions {
    /// Minimum number of endorsements (either direction, summed) for an edge.
    int min_endorsements = 2;
    /// Interaction kinds that count; empty means all kinds.
    std::set<InteractionKind> kinds;
};

/// The user graph: node i is users()[i]; users are sorted ascending, so node
/// order equals lexicographic user order.
class InteractionGraph {
public:
    InteractionGraph() = default;
    InteractionGraph(std::vector<UserId> users, Graph graph, int min_endorsements,
                     std::vector<UserId> excluded_users);

    const Graph& graph() const noexcept { return graph_; }
    const std::vector<UserId>& users() const noexcept { return users_; }
    std::optional<NodeId> node_of(const UserId& user) const;
    int min_endorsements() const noexcept { return min_endorsements_; }
    /// Users seen in qualifying-kind interactions but left without an edge.
    const std::vector<UserId>& excluded_users() const noexcept { return excluded_; }

    Weight weight(const UserId& a, const UserId& b) const;

private:
    std::vector<UserId> users_;
    Graph graph_;
    int min_endorsements_ = 1;
    std::vector<UserId> excluded_;
    std::unordered_map<UserId, NodeId> index_;
};

InteractionGraph build_graph(const std::vector<InteractionRecord>& interactions,
                             const BuildOptions& options = {});

struct GraphStats {
    std::size_t nodes = 0;
    std::size_t edges = 0;
    Weight total_volume = 0;
    std::vector<std::size_t> component_sizes;

    bool operator==(const GraphStats&) const = default;
};

GraphStats graph_stats(const Graph& graph);

struct DatasetMeta {
    std::string topic;
    std::string source;
    std::string ingested_at;
    std::size_t posts = 0;
    std::size_t interactions = 0;
    std::size_t self_interactions_dropped = 0;
    std::size_t unknown_post_records = 0;
    std::size_t skipped_lines = 0;
};

/// `{"nodes": [...], "edges": [{"u":..., "v":..., "w":...}]}` plus
/// min_endorsements and the excluded user count.
void write_graph_json(std::ostream& out, const InteractionGraph& graph);
InteractionGraph read_graph_json(std::istream& in);

void write_graphml(std::ostream& out, const InteractionGraph& graph,
                   const std::vector<ClusterId>* assignment = nullptr);

}  // namespace vpd
