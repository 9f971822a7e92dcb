#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vpd/graph_builder.hpp"
#include "vpd/selector.hpp"
#include "vpd/text.hpp"

namespace vpd {

struct RankedTerm {
    std::string term;
    double score = 0.0;
    std::size_t subject_rank = 0;
    /// Absent when the term is missing from the contrast list; it is then
    /// scored as if ranked one past the bottom.
    std::optional<std::size_t> contrast_rank;
    std::size_t subject_freq = 0;

    bool operator==(const RankedTerm&) const = default;
};

/// score(w) = rank(w, contrast) / |contrast| - rank(w, subject) / |subject|
/// for every subject term, sorted by score descending, then subject frequency
/// descending, then term.
struct RankDiffResult {
    std::vector<RankedTerm> terms;
    std::size_t subject_size = 0;
    std::size_t contrast_size = 0;
};

/// Throws ParameterError when either list is empty.
RankDiffResult rank_difference(const TermFrequencyList& subject, const TermFrequencyList& contrast);

/// The first m terms; once any term scores above zero only positive-scoring
/// terms are returned.
std::vector<RankedTerm> top_descriptive(const RankDiffResult& result, std::size_t m);

struct IrdParams {
    std::size_t n = 200;
    std::size_t m = 10;
};

struct ViewpointDescription {
    ClusterId viewpoint = 0;
    std::vector<RankedTerm> terms;
    RankDiffResult ranked;
    TermFrequencyList subject;
    TermFrequencyList contrast;
};

struct TermDrilldown {
    ClusterId viewpoint = 0;
    std::vector<std::string> query_terms;
    std::vector<RankedTerm> terms;
    RankDiffResult ranked;
    TermFrequencyList subject;
    TermFrequencyList contrast;
    std::size_t subject_texts = 0;
    std::size_t contrast_texts = 0;
};

/// Normalized texts grouped by the cluster of their author, together with the
/// selection that says which clusters are viewpoints. Immutable once built.
class ViewpointCorpus {
public:
    ViewpointCorpus(ViewpointSelection selection, std::vector<std::vector<TokenList>> by_cluster,
                    Tokenizer tokenizer);

    /// Groups `posts` by the cluster of their author; posts by users outside
    /// `cluster_of` are ignored.
    static ViewpointCorpus build(const std::vector<Post>& posts, const Tokenizer& tokenizer,
                                 const std::map<UserId, ClusterId>& cluster_of,
                                 const ViewpointSelection& selection);

    const ViewpointSelection& selection() const noexcept { return selection_; }
    const std::vector<TokenList>& texts(ClusterId cluster) const;
    ClusterId num_clusters() const noexcept { return static_cast<ClusterId>(by_cluster_.size()); }
    const Tokenizer& tokenizer() const noexcept { return tokenizer_; }

private:
    ViewpointSelection selection_;
    std::vector<std::vector<TokenList>> by_cluster_;
    Tokenizer tokenizer_;
};

/// First iteration: the viewpoint's texts against those of every other
/// viewpoint cluster (noisy clusters excluded).
ViewpointDescription describe_viewpoint(const ViewpointCorpus& corpus, ClusterId viewpoint,
                                        const IrdParams& params = {});

/// Next iterations: within one viewpoint, texts mentioning any of `terms`
/// against the rest. Query terms are normalized like text and removed from
/// the subject list.
TermDrilldown drill_terms(const ViewpointCorpus& corpus, ClusterId viewpoint,
                          const std::vector<std::string>& terms, const IrdParams& params = {200, 5});

}  // namespace vpd
