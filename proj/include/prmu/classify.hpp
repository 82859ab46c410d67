#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "document.hpp"
#include "log.hpp"
#include "textnorm.hpp"

namespace prmu {

enum class Category : std::uint8_t { Present, Reordered, Mixed, Unseen };

inline constexpr Category kAllCategories[] = {Category::Present, Category::Reordered,
                                              Category::Mixed, Category::Unseen};

inline constexpr char category_code(Category c)
{
    switch (c) {
    case Category::Present:
        return 'P';
    case Category::Reordered:
        return 'R';
    case Category::Mixed:
        return 'M';
    case Category::Unseen:
        return 'U';
    }
    return '?';
}

inline constexpr std::string_view category_name(Category c)
{
    switch (c) {
    case Category::Present:
        return "Present";
    case Category::Reordered:
        return "Reordered";
    case Category::Mixed:
        return "Mixed";
    case Category::Unseen:
        return "Unseen";
    }
    return "?";
}

/// Accepts a one-letter code or a full name, case-insensitively.
inline Category parse_category(std::string_view text)
{
    std::string lower;
    for (char c : text) {
        lower += static_cast<char>(c >= 'A' && c <= 'Z' ? c + 32 : c);
    }
    for (Category c : kAllCategories) {
        std::string name(category_name(c));
        name[0] = static_cast<char>(name[0] + 32);
        if (lower.size() == 1 && lower[0] == category_code(c) + 32) {
            return c;
        }
        if (lower == name) {
            return c;
        }
    }
    throw std::invalid_argument("unknown keyphrase category '" + std::string(text) + "'");
}

/// Mixed and Unseen keyphrases introduce words the document lacks.
inline constexpr bool expands_document(Category c)
{
    return c == Category::Mixed || c == Category::Unseen;
}

/// True iff `needle` occurs as a contiguous run of `hay`. The separator
/// never matches, so no run can straddle title and abstract.
inline bool is_contiguous_subsequence(const TermSeq& needle, const std::vector<std::string>& hay)
{
    if (needle.empty()) {
        throw std::invalid_argument("is_contiguous_subsequence: empty needle");
    }
    auto eq = [](const std::string& a, const std::string& b) { return a == b && a != kSeparator; };
    return std::search(hay.begin(), hay.end(), needle.begin(), needle.end(), eq) != hay.end();
}

inline bool is_contiguous_subsequence(const TermSeq& needle, const DocTermSeq& hay)
{
    return is_contiguous_subsequence(needle, hay.terms());
}

/// Classifies keyphrases against one document. Holds the document's term
/// set so repeated lookups avoid rebuilding it.
class DocumentMatcher {
public:
    explicit DocumentMatcher(const DocTermSeq& doc) : doc_(&doc)
    {
        for (const auto& t : doc.terms()) {
            if (t != kSeparator) {
                vocab_.insert(t);
            }
        }
    }

    [[nodiscard]] bool contains_term(const std::string& term) const { return vocab_.contains(term); }

    [[nodiscard]] Category classify(const TermSeq& kp) const
    {
        if (kp.empty()) {
            throw std::invalid_argument("classify: empty keyphrase");
        }
        if (is_contiguous_subsequence(kp, *doc_)) {
            return Category::Present;
        }
        std::size_t found = 0;
        for (const auto& t : kp) {
            found += contains_term(t) ? 1 : 0;
        }
        if (found == kp.size()) {
            return Category::Reordered;
        }
        return found == 0 ? Category::Unseen : Category::Mixed;
    }

private:
    const DocTermSeq* doc_;
    std::unordered_set<std::string> vocab_;
};

inline Category classify(const TermSeq& kp, const DocTermSeq& doc)
{
    return DocumentMatcher(doc).classify(kp);
}

struct KeyphraseLabel {
    std::string keyphrase;
    /// Empty when the keyphrase normalizes to no terms.
    std::optional<Category> category;
};

/// One label per keyphrase in input order. Keyphrases without any
/// alphanumeric content are reported and left unlabeled.
inline std::vector<KeyphraseLabel> classify_document(const Document& doc)
{
    std::vector<KeyphraseLabel> out;
    out.reserve(doc.keyphrases.size());
    DocumentMatcher matcher(doc.terms);
    for (std::size_t i = 0; i < doc.keyphrases.size(); ++i) {
        const auto& kp = doc.keyphrase_terms[i];
        if (kp.empty()) {
            warn("document '" + doc.id + "': keyphrase '" + doc.keyphrases[i] +
                 "' has no terms after normalization; skipped");
            out.push_back({doc.keyphrases[i], std::nullopt});
            continue;
        }
        out.push_back({doc.keyphrases[i], matcher.classify(kp)});
    }
    return out;
}

/// Unique keyphrase terms of `doc` that do not occur in its title or
/// abstract: the words its keyphrases actually add.
inline std::set<std::string> expansion_terms(const Document& doc)
{
    DocumentMatcher matcher(doc.terms);
    std::set<std::string> out;
    for (const auto& kp : doc.keyphrase_terms) {
        for (const auto& t : kp) {
            if (!matcher.contains_term(t)) {
                out.insert(t);
            }
        }
    }
    return out;
}

/// Mergeable per-corpus tallies behind a DistributionReport.
struct DistributionCounts {
    std::uint64_t per_category[4] = {0, 0, 0, 0};
    std::uint64_t skipped_keyphrases = 0;
    std::uint64_t unique_terms = 0;          // sum over documents
    std::uint64_t unique_unseen_terms = 0;   // sum over documents
    double macro_uw_sum = 0.0;               // sum of per-document ratios
    std::uint64_t macro_uw_docs = 0;         // documents with at least one kp term
    std::uint64_t docs = 0;

    [[nodiscard]] std::uint64_t keyphrases() const
    {
        return per_category[0] + per_category[1] + per_category[2] + per_category[3];
    }

    DistributionCounts& operator+=(const DistributionCounts& o)
    {
        for (int i = 0; i < 4; ++i) {
            per_category[i] += o.per_category[i];
        }
        skipped_keyphrases += o.skipped_keyphrases;
        unique_terms += o.unique_terms;
        unique_unseen_terms += o.unique_unseen_terms;
        macro_uw_sum += o.macro_uw_sum;
        macro_uw_docs += o.macro_uw_docs;
        docs += o.docs;
        return *this;
    }
};

inline DistributionCounts count_document(const Document& doc)
{
    DistributionCounts counts;
    counts.docs = 1;
    for (const auto& label : classify_document(doc)) {
        if (label.category) {
            ++counts.per_category[static_cast<int>(*label.category)];
        } else {
            ++counts.skipped_keyphrases;
        }
    }
    std::set<std::string> kp_terms;
    for (const auto& kp : doc.keyphrase_terms) {
        kp_terms.insert(kp.begin(), kp.end());
    }
    std::size_t unseen = expansion_terms(doc).size();
    counts.unique_terms = kp_terms.size();
    counts.unique_unseen_terms = unseen;
    if (!kp_terms.empty()) {
        counts.macro_uw_sum = static_cast<double>(unseen) / static_cast<double>(kp_terms.size());
        counts.macro_uw_docs = 1;
    }
    return counts;
}

struct DistributionReport {
    double pct[4] = {0, 0, 0, 0};  // indexed by Category
    /// Unique keyphrase words absent from their document, pooled over documents.
    double pct_uw = 0.0;
    /// Same ratio averaged per document.
    double pct_uw_macro = 0.0;
    std::uint64_t n_keyphrases = 0;
    std::uint64_t n_docs = 0;
    std::uint64_t n_skipped = 0;

    [[nodiscard]] double percent(Category c) const { return pct[static_cast<int>(c)]; }
};

inline DistributionReport make_report(const DistributionCounts& counts)
{
    const std::uint64_t total = counts.keyphrases();
    if (total == 0) {
        throw std::invalid_argument("corpus_distribution: corpus has no valid keyphrases");
    }
    DistributionReport r;
    for (int i = 0; i < 4; ++i) {
        r.pct[i] = 100.0 * static_cast<double>(counts.per_category[i]) / static_cast<double>(total);
    }
    if (counts.unique_terms > 0) {
        r.pct_uw = 100.0 * static_cast<double>(counts.unique_unseen_terms) /
                   static_cast<double>(counts.unique_terms);
    }
    if (counts.macro_uw_docs > 0) {
        r.pct_uw_macro = 100.0 * counts.macro_uw_sum / static_cast<double>(counts.macro_uw_docs);
    }
    r.n_keyphrases = total;
    r.n_docs = counts.docs;
    r.n_skipped = counts.skipped_keyphrases;
    return r;
}

inline DistributionReport corpus_distribution(const Corpus& corpus)
{
    if (corpus.empty()) {
        throw std::invalid_argument("corpus_distribution: empty corpus");
    }
    DistributionCounts counts;
    for (const auto& doc : corpus) {
        counts += count_document(doc);
    }
    return make_report(counts);
}

}  // namespace prmu
