#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stopwords.hpp"

namespace rgif::eval {

/// Sorted (feature index, value) pairs.
using SparseVector = std::vector<std::pair<std::uint32_t, double>>;

namespace detail {

// Decodes one UTF-8 sequence starting at s[i]; malformed bytes decode as U+FFFD.
inline char32_t decode_utf8(std::string_view s, std::size_t& i) {
    auto b0 = static_cast<unsigned char>(s[i]);
    auto cont = [&](std::size_t k) -> int {
        if (i + k >= s.size()) return -1;
        auto b = static_cast<unsigned char>(s[i + k]);
        return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
    };
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    int len = (b0 & 0xE0) == 0xC0 ? 2 : (b0 & 0xF0) == 0xE0 ? 3 : (b0 & 0xF8) == 0xF0 ? 4 : 0;
    if (len == 0) {
        ++i;
        return 0xFFFD;
    }
    char32_t cp = b0 & (0x7F >> len);
    for (int k = 1; k < len; ++k) {
        int c = cont(static_cast<std::size_t>(k));
        if (c < 0) {
            ++i;
            return 0xFFFD;
        }
        cp = (cp << 6) | static_cast<char32_t>(c);
    }
    i += static_cast<std::size_t>(len);
    return cp;
}

// Word characters: ASCII letters, digits and underscore, plus non-ASCII code
// points outside the punctuation, symbol and emoji blocks.
inline bool is_word_char(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9') || cp == '_';
    }
    if (cp <= 0xBF) return false;                       // Latin-1 punctuation and symbols
    if (cp == 0xD7 || cp == 0xF7) return false;         // multiplication, division signs
    if (cp >= 0x2000 && cp <= 0x2BFF) return false;     // general punctuation .. misc symbols and arrows
    if (cp >= 0x3000 && cp <= 0x303F) return false;     // CJK punctuation
    if (cp >= 0xFE00 && cp <= 0xFE0F) return false;     // variation selectors
    if (cp == 0xFEFF || cp == 0xFFFD) return false;
    if (cp >= 0x1F000 && cp <= 0x1FAFF) return false;   // emoji and pictographs
    return true;
}

}  // namespace detail

/// Lowercased word tokens. Only ASCII letters are case-folded.
inline std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t start = i;
        char32_t cp = detail::decode_utf8(text, i);
        if (detail::is_word_char(cp)) {
            if (cp < 0x80) {
                current.push_back(static_cast<char>(cp >= 'A' && cp <= 'Z' ? cp + ('a' - 'A') : cp));
            } else {
                current.append(text.substr(start, i - start));
            }
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

struct VectorizerOptions {
    std::size_t min_df = 2;
    std::size_t max_features = 1000;
    bool use_stopwords = true;
};

class VectorizerError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// TF-IDF over unigrams and adjacent bigrams with stop words removed before
/// pairing. tf is the raw count, idf = ln((1 + N) / (1 + df)) + 1, and rows are
/// L2-normalized unless they are all zero.
class TfidfVectorizer {
public:
    TfidfVectorizer() = default;
    explicit TfidfVectorizer(VectorizerOptions options) : options_(options) {}

    void set_stopwords(std::set<std::string> words) { stopwords_ = std::move(words); }

    std::vector<std::string> terms(std::string_view text) const {
        std::vector<std::string> kept;
        for (auto& tok : tokenize(text)) {
            if (options_.use_stopwords && is_stopword(tok)) continue;
            kept.push_back(std::move(tok));
        }
        std::vector<std::string> out = kept;
        for (std::size_t i = 0; i + 1 < kept.size(); ++i) out.push_back(kept[i] + " " + kept[i + 1]);
        return out;
    }

    void fit(const std::vector<std::string>& texts) {
        std::map<std::string, std::size_t> df;
        for (const auto& t : texts) {
            auto ts = terms(t);
            std::set<std::string> uniq(ts.begin(), ts.end());
            for (const auto& term : uniq) ++df[term];
        }
        std::vector<std::pair<std::string, std::size_t>> candidates;
        for (auto& [term, count] : df) {
            if (count >= options_.min_df) candidates.emplace_back(term, count);
        }
        // map order is lexicographic, so a stable sort on df keeps ties by term
        std::stable_sort(candidates.begin(), candidates.end(),
                         [](const auto& a, const auto& b) { return a.second > b.second; });
        if (candidates.size() > options_.max_features) candidates.resize(options_.max_features);
        std::sort(candidates.begin(), candidates.end());

        const double n = static_cast<double>(texts.size());
        vocabulary_.clear();
        df_.clear();
        idf_.clear();
        index_.clear();
        for (auto& [term, count] : candidates) {
            index_.emplace(term, static_cast<std::uint32_t>(vocabulary_.size()));
            vocabulary_.push_back(term);
            df_.push_back(count);
            idf_.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
        }
        document_count_ = texts.size();
        fitted_ = true;
    }

    SparseVector transform(std::string_view text) const {
        if (!fitted_) throw VectorizerError("transform called before fit");
        std::map<std::uint32_t, double> counts;
        for (const auto& term : terms(text)) {
            if (auto it = index_.find(term); it != index_.end()) counts[it->second] += 1.0;
        }
        SparseVector row;
        double norm2 = 0.0;
        for (auto& [idx, tf] : counts) {
            double v = tf * idf_[idx];
            row.emplace_back(idx, v);
            norm2 += v * v;
        }
        if (norm2 > 0.0) {
            double inv = 1.0 / std::sqrt(norm2);
            for (auto& [_, v] : row) v *= inv;
        }
        return row;
    }

    std::vector<SparseVector> transform_all(const std::vector<std::string>& texts) const {
        std::vector<SparseVector> out;
        out.reserve(texts.size());
        for (const auto& t : texts) out.push_back(transform(t));
        return out;
    }

    bool fitted() const { return fitted_; }
    const VectorizerOptions& options() const { return options_; }
    const std::vector<std::string>& vocabulary() const { return vocabulary_; }
    const std::vector<std::size_t>& document_frequency() const { return df_; }
    const std::vector<double>& idf() const { return idf_; }
    std::size_t document_count() const { return document_count_; }
    std::size_t feature_count() const { return vocabulary_.size(); }

    /// Restores a fitted state, e.g. from a saved model.
    void restore(std::vector<std::string> vocabulary, std::vector<std::size_t> df, std::vector<double> idf,
                 std::size_t documents) {
        if (vocabulary.size() != df.size() || vocabulary.size() != idf.size()) {
            throw VectorizerError("vectorizer tables have different lengths");
        }
        vocabulary_ = std::move(vocabulary);
        df_ = std::move(df);
        idf_ = std::move(idf);
        document_count_ = documents;
        index_.clear();
        for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
            index_.emplace(vocabulary_[i], static_cast<std::uint32_t>(i));
        }
        fitted_ = true;
    }

private:
    bool is_stopword(const std::string& tok) const {
        if (stopwords_) return stopwords_->count(tok) != 0;
        return std::binary_search(kEnglishStopwords.begin(), kEnglishStopwords.end(), std::string_view(tok));
    }

    VectorizerOptions options_;
    std::optional<std::set<std::string>> stopwords_;
    std::vector<std::string> vocabulary_;
    std::vector<std::size_t> df_;
    std::vector<double> idf_;
    std::unordered_map<std::string, std::uint32_t> index_;
    std::size_t document_count_ = 0;
    bool fitted_ = false;
};

}  // namespace rgif::eval
