#include "vpd/text.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "vpd/error.hpp"

namespace vpd {

namespace {

// NLTK's English list with apostrophes removed, plus Twitter noise words.
constexpr const char* kStopwords[] = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "youre", "youve",
    "youll", "youd", "your", "yours", "yourself", "yourselves", "he", "him", "his", "himself",
    "she", "shes", "her", "hers", "herself", "it", "its", "itself", "they", "them", "their",
    "theirs", "themselves", "what", "which", "who", "whom", "this", "that", "thatll", "these",
    "those", "am", "is", "are", "was", "were", "be", "been", "being", "have", "has", "had",
    "having", "do", "does", "did", "doing", "a", "an", "the", "and", "but", "if", "or",
    "because", "as", "until", "while", "of", "at", "by", "for", "with", "about", "against",
    "between", "into", "through", "during", "before", "after", "above", "below", "to", "from",
    "up", "down", "in", "out", "on", "off", "over", "under", "again", "further", "then", "once",
    "here", "there", "when", "where", "why", "how", "all", "any", "both", "each", "few", "more",
    "most", "other", "some", "such", "no", "nor", "not", "only", "own", "same", "so", "than",
    "too", "very", "s", "t", "can", "will", "just", "don", "dont", "should", "shouldve", "now",
    "d", "ll", "m", "o", "re", "ve", "y", "ain", "aren", "arent", "couldn", "couldnt", "didn",
    "didnt", "doesn", "doesnt", "hadn", "hadnt", "hasn", "hasnt", "haven", "havent", "isn",
    "isnt", "ma", "mightn", "mightnt", "mustn", "mustnt", "needn", "neednt", "shan", "shant",
    "shouldn", "shouldnt", "wasn", "wasnt", "weren", "werent", "won", "wont", "wouldn",
    "wouldnt", "rt", "via", "amp", "http", "https"};

bool is_ascii_word(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

std::size_t sequence_len(std::string_view s, std::size_t i) {
    const auto c = static_cast<unsigned char>(s[i]);
    const std::size_t len = c >= 0xF0 ? 4 : c >= 0xE0 ? 3 : c >= 0xC0 ? 2 : 1;
    return std::min(len, s.size() - i);
}

// Length in bytes of a UTF-8 sequence starting at `s[i]` that counts as part
// of a word; 0 when it is a separator. General-punctuation code points
// (U+2000..U+206F, encoded E2 80..81 xx) separate words.
std::size_t word_char_len(std::string_view s, std::size_t i) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) return is_ascii_word(c) ? 1 : 0;
    if (c == 0xE2 && i + 2 < s.size()) {
        const auto c1 = static_cast<unsigned char>(s[i + 1]);
        if (c1 == 0x80 || c1 == 0x81) return 0;
    }
    return sequence_len(s, i);
}

// ASCII apostrophe, U+2018 or U+2019; returns its byte length or 0.
std::size_t apostrophe_len(std::string_view s, std::size_t i) {
    if (s[i] == '\'') return 1;
    if (i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 &&
        static_cast<unsigned char>(s[i + 1]) == 0x80 &&
        (static_cast<unsigned char>(s[i + 2]) == 0x98 ||
         static_cast<unsigned char>(s[i + 2]) == 0x99)) {
        return 3;
    }
    return 0;
}

std::size_t utf8_length(std::string_view s) {
    return static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

bool ends_with(std::string_view w, std::string_view suffix) {
    return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

std::string strip_apostrophes(std::string_view w) {
    std::string out;
    for (std::size_t i = 0; i < w.size();) {
        if (std::size_t a = apostrophe_len(w, i)) {
            i += a;
        } else {
            out += w[i++];
        }
    }
    return out;
}

// Collects a run of word characters starting at i, skipping apostrophes that
// sit between word characters.
std::string read_word(std::string_view s, std::size_t& i) {
    std::string word;
    while (i < s.size()) {
        if (std::size_t len = word_char_len(s, i)) {
            word.append(s.substr(i, len));
            i += len;
        } else if (std::size_t a = apostrophe_len(s, i);
                   a && !word.empty() && i + a < s.size() && word_char_len(s, i + a)) {
            i += a;
        } else {
            break;
        }
    }
    return word;
}

}  // namespace

std::string SuffixStemmer::normalize(std::string_view w) const {
    if (ends_with(w, "ies") && !ends_with(w, "aies") && !ends_with(w, "eies") && w.size() >= 4) {
        return std::string(w.substr(0, w.size() - 3)) + "y";
    }
    if (ends_with(w, "es") && !ends_with(w, "aes") && !ends_with(w, "ees") && !ends_with(w, "oes") &&
        w.size() >= 4) {
        return std::string(w.substr(0, w.size() - 1));
    }
    if (ends_with(w, "s") && !ends_with(w, "us") && !ends_with(w, "ss") && w.size() >= 4) {
        return std::string(w.substr(0, w.size() - 1));
    }
    return std::string(w);
}

std::shared_ptr<const Normalizer> make_normalizer(const std::string& name) {
    if (name == "stem") return std::make_shared<SuffixStemmer>();
    if (name == "identity") return std::make_shared<IdentityNormalizer>();
    throw ParameterError("unknown normalizer '" + name + "' (expected stem or identity)");
}

const std::set<std::string>& default_stopwords() {
    static const std::set<std::string> words(std::begin(kStopwords), std::end(kStopwords));
    return words;
}

std::set<std::string> read_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open stopword file " + path);
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::transform(line.begin(), line.end(), line.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        words.insert(strip_apostrophes(line));
    }
    return words;
}

Tokenizer::Tokenizer() : Tokenizer(default_stopwords(), std::make_shared<SuffixStemmer>()) {}

Tokenizer::Tokenizer(std::set<std::string> stopwords, std::shared_ptr<const Normalizer> normalizer)
    : normalizer_(std::move(normalizer)) {
    for (const std::string& w : stopwords) stopwords_.insert(strip_apostrophes(w));
    if (!normalizer_) throw ParameterError("tokenizer needs a normalizer");
}

std::string Tokenizer::finish(std::string word) const {
    if (word.empty()) return {};
    if (word.front() == '#') return utf8_length(word) - 1 <= 2 ? std::string{} : word;
    if (utf8_length(word) <= 2 || stopwords_.contains(word)) return {};
    std::string norm = normalizer_->normalize(word);
    if (utf8_length(norm) <= 2 || stopwords_.contains(norm)) return {};
    return norm;
}

std::vector<std::string> Tokenizer::tokenize(std::string_view text) const {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) {
        return c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c);
    });

    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < lower.size()) {
        const std::size_t begin = lower.find_first_not_of(" \t\r\n\f\v", pos);
        if (begin == std::string::npos) break;
        std::size_t end = lower.find_first_of(" \t\r\n\f\v", begin);
        if (end == std::string::npos) end = lower.size();
        pos = end;
        std::string_view raw = std::string_view(lower).substr(begin, end - begin);
        if (raw.find("://") != std::string_view::npos || raw.starts_with("www.")) continue;

        for (std::size_t i = 0; i < raw.size();) {
            const char c = raw[i];
            const bool marker = (c == '@' || c == '#') && i + 1 < raw.size() && word_char_len(raw, i + 1);
            if (marker) {
                ++i;
                std::string word = read_word(raw, i);
                if (c == '#') {
                    if (auto tok = finish("#" + word); !tok.empty()) out.push_back(std::move(tok));
                }
            } else if (word_char_len(raw, i)) {
                if (auto tok = finish(read_word(raw, i)); !tok.empty()) out.push_back(std::move(tok));
            } else {
                i += sequence_len(raw, i);
            }
        }
    }
    return out;
}

std::string Tokenizer::normalize_term(std::string_view term) const {
    auto tokens = tokenize(term);
    return tokens.size() == 1 ? tokens.front() : std::string{};
}

TermFrequencyList term_frequencies(const std::vector<const TokenList*>& documents,
                                   const TermFilter& filter) {
    std::map<std::string, std::size_t> counts;
    for (const TokenList* doc : documents) {
        for (const std::string& t : *doc) {
            if (!filter || filter(t)) ++counts[t];
        }
    }
    TermFrequencyList out;
    out.entries.reserve(counts.size());
    for (auto& [term, freq] : counts) out.entries.push_back({term, freq});
    // map order is term-ascending; a stable sort on frequency keeps it for ties
    std::stable_sort(out.entries.begin(), out.entries.end(),
                     [](const TermFrequency& a, const TermFrequency& b) { return a.freq > b.freq; });
    return out;
}

TermFrequencyList term_frequencies(const std::vector<std::string>& texts, const Tokenizer& tokenizer,
                                   const TermFilter& filter) {
    std::vector<TokenList> docs;
    docs.reserve(texts.size());
    for (const std::string& t : texts) docs.push_back(tokenizer.tokenize(t));
    std::vector<const TokenList*> ptrs;
    for (const TokenList& d : docs) ptrs.push_back(&d);
    return term_frequencies(ptrs, filter);
}

TermFrequencyList top_n(const TermFrequencyList& list, std::size_t n) {
    if (n < 1) throw ParameterError("n must be >= 1");
    TermFrequencyList out;
    out.provenance = list.provenance;
    const std::size_t keep = std::min(n, list.entries.size());
    out.entries.assign(list.entries.begin(), list.entries.begin() + static_cast<std::ptrdiff_t>(keep));
    return out;
}

}  // namespace vpd
