#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "index.hpp"
#include "log.hpp"
#include "ranking.hpp"

namespace prmu {

/// How feedback documents are weighted when estimating the relevance model.
enum class FeedbackWeighting {
    /// First-pass scores, shifted to be non-negative and scaled to sum to 1.
    Score,
    /// Every feedback document weighted equally.
    Uniform,
};

struct Rm3Params {
    std::size_t fb_docs = 10;
    std::size_t fb_terms = 10;
    double orig_weight = 0.5;
    /// Feedback terms shorter than this many characters are ignored.
    std::size_t min_term_length = 2;
    FeedbackWeighting weighting = FeedbackWeighting::Score;

    void validate() const
    {
        if (fb_docs == 0 || fb_terms == 0) {
            throw std::invalid_argument("RM3 needs fb_docs >= 1 and fb_terms >= 1");
        }
        if (!(orig_weight >= 0.0 && orig_weight <= 1.0)) {
            throw std::invalid_argument("RM3 orig_weight must lie in [0, 1]");
        }
    }
};

class NoFeedbackDocuments : public std::runtime_error {
public:
    NoFeedbackDocuments() : std::runtime_error("no feedback documents") {}
};

namespace detail {
inline std::size_t utf8_length(std::string_view s)
{
    return static_cast<std::size_t>(std::count_if(
        s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}
}  // namespace detail

/// Relevance model over the top feedback documents:
/// weight(t) proportional to sum_d P(t|d) * s(d), with P(t|d) = tf / doc_len,
/// truncated to the fb_terms heaviest terms (ties by term) and renormalized.
inline QueryModel estimate_relevance_model(const InvertedIndex& index,
                                           const std::vector<ScoredHit>& hits,
                                           const Rm3Params& params)
{
    params.validate();
    if (hits.empty()) {
        throw NoFeedbackDocuments();
    }
    const std::size_t n = std::min(params.fb_docs, hits.size());
    std::vector<double> doc_weight(n, 1.0 / static_cast<double>(n));
    if (params.weighting == FeedbackWeighting::Score) {
        double lowest = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            lowest = std::min(lowest, hits[i].score);
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sum += hits[i].score - lowest;
        }
        if (sum > 0.0) {
            for (std::size_t i = 0; i < n; ++i) {
                doc_weight[i] = (hits[i].score - lowest) / sum;
            }
        }
    }

    std::map<TermId, double> weights;
    for (std::size_t i = 0; i < n; ++i) {
        const DocNo d = hits[i].doc;
        const double len = index.doc_len(d);
        for (const auto& tf : index.doc_terms(d)) {
            if (detail::utf8_length(index.term(tf.term)) < params.min_term_length) {
                continue;
            }
            weights[tf.term] += (static_cast<double>(tf.tf) / len) * doc_weight[i];
        }
    }

    std::vector<std::pair<TermId, double>> ranked;
    for (const auto& [t, w] : weights) {
        if (w > 0.0) {
            ranked.emplace_back(t, w);
        }
    }
    // Term ids follow lexicographic order, so comparing ids breaks ties by term.
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    if (ranked.size() > params.fb_terms) {
        ranked.resize(params.fb_terms);
    }
    double total = 0.0;
    for (const auto& [_, w] : ranked) {
        total += w;
    }
    std::map<std::string, double> model;
    for (const auto& [t, w] : ranked) {
        model[index.term(t)] = w / total;
    }
    return QueryModel(std::move(model));
}

/// orig_weight * original + (1 - orig_weight) * feedback, with the original
/// normalized first. An empty feedback model leaves the original alone.
inline QueryModel interpolate(const QueryModel& original, const QueryModel& feedback,
                              double orig_weight)
{
    if (!(orig_weight >= 0.0 && orig_weight <= 1.0)) {
        throw std::invalid_argument("interpolate: orig_weight must lie in [0, 1]");
    }
    QueryModel orig = original.normalized();
    if (feedback.empty()) {
        return orig;
    }
    std::map<std::string, double> out;
    for (const auto& [t, w] : orig.weights()) {
        out[t] = orig_weight * w + (1.0 - orig_weight) * feedback.weight(t);
    }
    for (const auto& [t, w] : feedback.weights()) {
        if (!out.contains(t)) {
            out[t] = (1.0 - orig_weight) * w;
        }
    }
    return QueryModel(std::move(out));
}

/// BM25 first pass, relevance model from its top documents, interpolation,
/// then a weighted BM25 second pass.
inline std::vector<ScoredHit> search_rm3(const InvertedIndex& index, const QueryModel& query,
                                         const Bm25Params& bm25, const Rm3Params& rm3,
                                         std::size_t k)
{
    rm3.validate();
    auto first = search(index, query, k, bm25);
    if (first.empty()) {
        warn("search_rm3: first pass retrieved nothing; returning the empty BM25 result");
        return first;
    }
    QueryModel feedback = estimate_relevance_model(index, first, rm3);
    QueryModel expanded = interpolate(query, feedback, rm3.orig_weight);
    return search(index, expanded, k, bm25);
}

}  // namespace prmu
