#pragma once

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace vpd {

/// Maps a lowercased word to its normal form. Implementations must be
/// idempotent: normalize(normalize(w)) == normalize(w).
class Normalizer {
public:
    virtual ~Normalizer() = default;
    virtual std::string normalize(std::string_view word) const = 0;
    virtual std::string name() const = 0;
};

class IdentityNormalizer final : public Normalizer {
public:
    std::string normalize(std::string_view word) const override { return std::string(word); }
    std::string name() const override { return "identity"; }
};

/// Plural-stripping stemmer: -ies -> -y, -es -> -e, -s -> "" with the
/// usual exceptions (-aies, -eies, -aes, -ees, -oes, -us, -ss), applied only
/// when at least three characters remain.
class SuffixStemmer final : public Normalizer {
public:
    std::string normalize(std::string_view word) const override;
    std::string name() const override { return "stem"; }
};

/// "stem" or "identity"; throws ParameterError otherwise.
std::shared_ptr<const Normalizer> make_normalizer(const std::string& name);

/// The shipped English stopword list (plus retweet markers rt/via/amp).
const std::set<std::string>& default_stopwords();

/// One word per line; blank lines and lines starting with '#' skipped.
std::set<std::string> read_stopwords(const std::string& path);

class Tokenizer {
public:
    Tokenizer();
    Tokenizer(std::set<std::string> stopwords, std::shared_ptr<const Normalizer> normalizer);

    /// Lowercases, drops @mentions and URLs, splits on punctuation keeping
    /// hashtags whole, then removes stopwords and words of two characters or
    /// fewer (not counting a leading '#'). Words are normalized, hashtags are
    /// not.
    std::vector<std::string> tokenize(std::string_view text) const;

    /// Normal form of a single query term, or "" when the term would be
    /// filtered out of any text.
    std::string normalize_term(std::string_view term) const;

    const std::set<std::string>& stopwords() const noexcept { return stopwords_; }
    const Normalizer& normalizer() const noexcept { return *normalizer_; }

private:
    std::string finish(std::string word) const;

    std::set<std::string> stopwords_;
    std::shared_ptr<const Normalizer> normalizer_;
};

struct TermFrequency {
    std::string term;
    std::size_t freq = 0;

    bool operator==(const TermFrequency&) const = default;
};

/// Terms ordered by frequency descending, then term ascending.
struct TermFrequencyList {
    std::vector<TermFrequency> entries;
    std::string provenance;

    std::size_t size() const noexcept { return entries.size(); }
    bool empty() const noexcept { return entries.empty(); }
};

using TokenList = std::vector<std::string>;
using TermFilter = std::function<bool(const std::string&)>;

/// Occurrence counts over already-tokenized documents.
TermFrequencyList term_frequencies(const std::vector<const TokenList*>& documents,
                                   const TermFilter& filter = {});

/// Tokenizes and counts raw texts.
TermFrequencyList term_frequencies(const std::vector<std::string>& texts, const Tokenizer& tokenizer,
                                   const TermFilter& filter = {});

/// First min(n, size) entries. Throws ParameterError for n < 1.
TermFrequencyList top_n(const TermFrequencyList& list, std::size_t n);

}  // namespace vpd
