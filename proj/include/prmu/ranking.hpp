#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "corpus.hpp"
#include "index.hpp"
#include "log.hpp"
#include "textnorm.hpp"

namespace prmu {

struct Bm25Params {
    double k1 = 0.9;
    double b = 0.4;

    void validate() const
    {
        if (!(k1 >= 0.0) || !(b >= 0.0 && b <= 1.0)) {
            throw std::invalid_argument("BM25 parameters need k1 >= 0 and b in [0, 1]");
        }
    }
};

/// Okapi BM25 contribution of one term to one document, with the
/// non-negative idf ln(1 + (N - df + 0.5) / (df + 0.5)).
inline double bm25_term_score(double tf, double doc_len, double df, double num_docs, double avgdl,
                              const Bm25Params& params)
{
    if (!(tf >= 1.0) || !(df >= 1.0) || !(num_docs >= df) || !(doc_len >= 1.0) ||
        !(avgdl > 0.0)) {
        throw std::invalid_argument("bm25_term_score: need tf >= 1, df >= 1, N >= df, "
                                    "doc_len >= 1, avgdl > 0");
    }
    params.validate();
    const double k1 = params.k1;
    const double b = params.b;
    const double idf = std::log(1.0 + (num_docs - df + 0.5) / (df + 0.5));
    const double norm = k1 * (1.0 - b + b * doc_len / avgdl);
    return idf * (tf * (k1 + 1.0)) / (tf + norm);
}

/// Weighted bag of terms. Weights are non-negative; zero-weight terms are
/// kept but contribute nothing to scores.
class QueryModel {
public:
    QueryModel() = default;

    explicit QueryModel(std::map<std::string, double> weights) : weights_(std::move(weights))
    {
        for (const auto& [t, w] : weights_) {
            if (!(w >= 0.0)) {
                throw std::invalid_argument("query weight for '" + t + "' is negative or NaN");
            }
        }
    }

    /// Each distinct term weighted by its share of the term occurrences.
    static QueryModel from_terms(const TermSeq& terms)
    {
        std::map<std::string, double> counts;
        for (const auto& t : terms) {
            counts[t] += 1.0;
        }
        return QueryModel(std::move(counts)).normalized();
    }

    static QueryModel from_text(std::string_view text) { return from_terms(normalize(text)); }

    [[nodiscard]] const std::map<std::string, double>& weights() const { return weights_; }
    [[nodiscard]] bool empty() const { return weights_.empty(); }
    [[nodiscard]] std::size_t size() const { return weights_.size(); }

    [[nodiscard]] double weight(const std::string& term) const
    {
        auto it = weights_.find(term);
        return it == weights_.end() ? 0.0 : it->second;
    }

    [[nodiscard]] double total() const
    {
        double sum = 0.0;
        for (const auto& [_, w] : weights_) {
            sum += w;
        }
        return sum;
    }

    /// Weights scaled to sum to 1. Models already summing to 1 (within
    /// 1e-12) and all-zero models are returned unchanged.
    [[nodiscard]] QueryModel normalized() const
    {
        const double sum = total();
        if (sum <= 0.0 || std::abs(sum - 1.0) <= 1e-12) {
            return *this;
        }
        QueryModel out = *this;
        for (auto& [_, w] : out.weights_) {
            w /= sum;
        }
        return out;
    }

    friend bool operator==(const QueryModel&, const QueryModel&) = default;

private:
    std::map<std::string, double> weights_;
};

struct ScoredHit {
    std::string doc_id;
    DocNo doc = 0;
    double score = 0.0;
    std::size_t rank = 0;
};

/// Score-descending order with ascending document id as tie-breaker.
inline bool hit_before(const ScoredHit& a, const ScoredHit& b)
{
    if (a.score != b.score) {
        return a.score > b.score;
    }
    return a.doc < b.doc;
}

/// Top-k documents by sum over query terms of weight * BM25. Documents that
/// match no positively weighted query term are never returned.
inline std::vector<ScoredHit> search(const InvertedIndex& index, const QueryModel& query,
                                     std::size_t k, const Bm25Params& params = {})
{
    if (k == 0) {
        throw std::invalid_argument("search: k must be at least 1");
    }
    params.validate();
    if (query.empty()) {
        warn("search: empty query");
        return {};
    }
    const double n = static_cast<double>(index.num_docs());
    const double avgdl = index.avg_doc_len();
    std::vector<double> acc(index.num_docs(), 0.0);
    std::vector<DocNo> touched;
    std::vector<bool> seen(index.num_docs(), false);
    for (const auto& [term, weight] : query.weights()) {
        if (weight <= 0.0) {
            continue;
        }
        auto plist = index.postings(term);
        if (plist.empty()) {
            continue;
        }
        const double df = static_cast<double>(plist.size());
        for (const auto& p : plist) {
            acc[p.doc] += weight * bm25_term_score(p.tf, index.doc_len(p.doc), df, n, avgdl, params);
            if (!seen[p.doc]) {
                seen[p.doc] = true;
                touched.push_back(p.doc);
            }
        }
    }
    std::vector<ScoredHit> hits;
    hits.reserve(touched.size());
    for (DocNo d : touched) {
        hits.push_back({{}, d, acc[d], 0});
    }
    const std::size_t keep = std::min(k, hits.size());
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(keep), hits.end(),
                      hit_before);
    hits.resize(keep);
    for (std::size_t i = 0; i < hits.size(); ++i) {
        hits[i].doc_id = index.doc_id(hits[i].doc);
        hits[i].rank = i + 1;
    }
    return hits;
}

inline std::vector<RunEntry> to_run_entries(const std::vector<ScoredHit>& hits)
{
    std::vector<RunEntry> out;
    out.reserve(hits.size());
    for (const auto& h : hits) {
        out.push_back({h.doc_id, h.score, h.rank});
    }
    return out;
}

}  // namespace prmu
