#include "vpd/ird.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "vpd/error.hpp"

namespace vpd {

RankDiffResult rank_difference(const TermFrequencyList& subject, const TermFrequencyList& contrast) {
    if (subject.empty()) throw ParameterError("rank difference needs a non-empty subject list");
    if (contrast.empty()) throw ParameterError("rank difference needs a non-empty contrast list");

    std::unordered_map<std::string, std::size_t> contrast_rank;
    for (std::size_t i = 0; i < contrast.size(); ++i) {
        contrast_rank.emplace(contrast.entries[i].term, i + 1);
    }

    const auto ns = static_cast<std::int64_t>(subject.size());
    const auto nc = static_cast<std::int64_t>(contrast.size());
    // Scores share the denominator ns * nc, so numerators order them exactly.
    struct Scored {
        RankedTerm term;
        std::int64_t numerator;
    };
    std::vector<Scored> scored;
    scored.reserve(subject.size());
    for (std::size_t i = 0; i < subject.size(); ++i) {
        RankedTerm t;
        t.term = subject.entries[i].term;
        t.subject_freq = subject.entries[i].freq;
        t.subject_rank = i + 1;
        auto it = contrast_rank.find(t.term);
        std::int64_t rc = nc + 1;
        if (it != contrast_rank.end()) {
            t.contrast_rank = it->second;
            rc = static_cast<std::int64_t>(it->second);
        }
        const std::int64_t numerator = rc * ns - static_cast<std::int64_t>(t.subject_rank) * nc;
        t.score = static_cast<double>(numerator) / static_cast<double>(ns * nc);
        scored.push_back({std::move(t), numerator});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.numerator != b.numerator) return a.numerator > b.numerator;
        if (a.term.subject_freq != b.term.subject_freq) return a.term.subject_freq > b.term.subject_freq;
        return a.term.term < b.term.term;
    });

    RankDiffResult out;
    out.subject_size = subject.size();
    out.contrast_size = contrast.size();
    out.terms.reserve(scored.size());
    for (Scored& s : scored) out.terms.push_back(std::move(s.term));
    return out;
}

std::vector<RankedTerm> top_descriptive(const RankDiffResult& result, std::size_t m) {
    const bool any_positive = !result.terms.empty() && result.terms.front().score > 0.0;
    std::vector<RankedTerm> out;
    for (const RankedTerm& t : result.terms) {
        if (out.size() >= m) break;
        if (any_positive && t.score <= 0.0) break;
        out.push_back(t);
    }
    return out;
}

ViewpointCorpus::ViewpointCorpus(ViewpointSelection selection,
                                 std::vector<std::vector<TokenList>> by_cluster, Tokenizer tokenizer)
    : selection_(std::move(selection)),
      by_cluster_(std::move(by_cluster)),
      tokenizer_(std::move(tokenizer)) {
    if (by_cluster_.size() < selection_.chosen_k) by_cluster_.resize(selection_.chosen_k);
}

ViewpointCorpus ViewpointCorpus::build(const std::vector<Post>& posts, const Tokenizer& tokenizer,
                                       const std::map<UserId, ClusterId>& cluster_of,
                                       const ViewpointSelection& selection) {
    std::vector<std::vector<TokenList>> by_cluster(selection.chosen_k);
    for (const Post& post : posts) {
        auto it = cluster_of.find(post.author);
        if (it == cluster_of.end()) continue;
        if (it->second >= by_cluster.size()) by_cluster.resize(it->second + 1);
        by_cluster[it->second].push_back(tokenizer.tokenize(post.text));
    }
    return ViewpointCorpus(selection, std::move(by_cluster), tokenizer);
}

const std::vector<TokenList>& ViewpointCorpus::texts(ClusterId cluster) const {
    if (cluster >= by_cluster_.size()) {
        throw NotFoundError("cluster " + std::to_string(cluster) + " does not exist");
    }
    return by_cluster_[cluster];
}

namespace {

void require_viewpoint(const ViewpointCorpus& corpus, ClusterId viewpoint) {
    if (!corpus.selection().is_viewpoint(viewpoint)) {
        throw NotFoundError("cluster " + std::to_string(viewpoint) + " is not a viewpoint cluster");
    }
}

std::vector<const TokenList*> pointers(const std::vector<TokenList>& docs) {
    std::vector<const TokenList*> out;
    out.reserve(docs.size());
    for (const TokenList& d : docs) out.push_back(&d);
    return out;
}

}  // namespace

ViewpointDescription describe_viewpoint(const ViewpointCorpus& corpus, ClusterId viewpoint,
                                        const IrdParams& params) {
    require_viewpoint(corpus, viewpoint);
    std::vector<const TokenList*> contrast_docs;
    for (ClusterId other : corpus.selection().viewpoint_clusters) {
        if (other == viewpoint) continue;
        for (const TokenList& d : corpus.texts(other)) contrast_docs.push_back(&d);
    }

    ViewpointDescription out;
    out.viewpoint = viewpoint;
    out.subject = top_n(term_frequencies(pointers(corpus.texts(viewpoint))), params.n);
    out.subject.provenance = "viewpoint " + std::to_string(viewpoint);
    out.contrast = top_n(term_frequencies(contrast_docs), params.n);
    out.contrast.provenance = "other viewpoints of " + std::to_string(viewpoint);
    if (out.subject.empty()) {
        throw DegenerateSplitError(DegenerateSplitError::Side::subject,
                                   "viewpoint " + std::to_string(viewpoint) + " has no terms");
    }
    if (out.contrast.empty()) {
        throw DegenerateSplitError(DegenerateSplitError::Side::contrast,
                                   "no other viewpoint has terms to contrast against");
    }
    out.ranked = rank_difference(out.subject, out.contrast);
    out.terms = top_descriptive(out.ranked, params.m);
    return out;
}

TermDrilldown drill_terms(const ViewpointCorpus& corpus, ClusterId viewpoint,
                          const std::vector<std::string>& terms, const IrdParams& params) {
    require_viewpoint(corpus, viewpoint);
    if (terms.empty()) throw ParameterError("drilldown needs at least one term");
    if (params.n < 1 || params.m < 1) throw ParameterError("n and m must be >= 1");

    TermDrilldown out;
    out.viewpoint = viewpoint;
    std::set<std::string> query;
    for (const std::string& raw : terms) {
        std::string t = corpus.tokenizer().normalize_term(raw);
        if (t.empty()) throw ParameterError("term '" + raw + "' is removed by preprocessing");
        if (query.insert(t).second) out.query_terms.push_back(t);
    }

    std::vector<const TokenList*> subject_docs;
    std::vector<const TokenList*> contrast_docs;
    for (const TokenList& doc : corpus.texts(viewpoint)) {
        const bool hit = std::any_of(doc.begin(), doc.end(),
                                     [&](const std::string& t) { return query.contains(t); });
        (hit ? subject_docs : contrast_docs).push_back(&doc);
    }
    out.subject_texts = subject_docs.size();
    out.contrast_texts = contrast_docs.size();
    if (subject_docs.empty()) {
        throw DegenerateSplitError(DegenerateSplitError::Side::subject,
                                   "no text of viewpoint " + std::to_string(viewpoint) +
                                       " mentions the query terms");
    }
    if (contrast_docs.empty()) {
        throw DegenerateSplitError(DegenerateSplitError::Side::contrast,
                                   "every text of viewpoint " + std::to_string(viewpoint) +
                                       " mentions the query terms");
    }

    out.subject = top_n(term_frequencies(subject_docs,
                                         [&](const std::string& t) { return !query.contains(t); }),
                        params.n);
    out.contrast = top_n(term_frequencies(contrast_docs), params.n);
    if (out.subject.empty()) {
        throw DegenerateSplitError(DegenerateSplitError::Side::subject,
                                   "matching texts contain only the query terms");
    }
    if (out.contrast.empty()) {
        throw DegenerateSplitError(DegenerateSplitError::Side::contrast,
                                   "non-matching texts contain no terms");
    }
    out.ranked = rank_difference(out.subject, out.contrast);
    out.terms = top_descriptive(out.ranked, params.m);
    return out;
}

}  // namespace vpd
