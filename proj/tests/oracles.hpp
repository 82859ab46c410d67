#pragma once

// Reference implementations used only by tests. They recompute everything
// from the raw documents without going through the inverted index, so they
// stay independent of the code paths they check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <prmu/prmu.hpp>

namespace oracle {

// Line-for-line port of the published reference categorizer:
//   def contains(subseq, inseq): any(inseq[pos:pos+len(subseq)] == subseq ...)
//   def get_prmu(kw, doc): P if contains, else count present words ...
inline bool contains(const std::vector<std::string>& subseq, const std::vector<std::string>& inseq)
{
    if (subseq.size() > inseq.size()) {
        return false;
    }
    for (std::size_t pos = 0; pos + subseq.size() <= inseq.size(); ++pos) {
        bool same = true;
        for (std::size_t i = 0; i < subseq.size(); ++i) {
            if (inseq[pos + i] != subseq[i]) {
                same = false;
                break;
            }
        }
        if (same) {
            return true;
        }
    }
    return false;
}

inline char get_prmu(const std::vector<std::string>& kw, const std::vector<std::string>& doc)
{
    if (contains(kw, doc)) {
        return 'P';
    }
    std::size_t present = 0;
    for (const auto& w : kw) {
        if (std::find(doc.begin(), doc.end(), w) != doc.end()) {
            ++present;
        }
    }
    if (present == kw.size()) {
        return 'R';
    }
    if (present > 0) {
        return 'M';
    }
    return 'U';
}

/// Terms a document contributes to the index under `config`, recomputed
/// with the reference categorizer.
inline std::vector<std::string> indexed_terms(const prmu::Document& doc, prmu::IndexConfig config)
{
    std::vector<std::string> out = doc.terms.content_terms();
    for (const auto& kp : doc.keyphrase_terms) {
        if (kp.empty()) {
            continue;
        }
        char code = get_prmu(kp, doc.terms.terms());
        bool wanted = false;
        for (prmu::Category c : prmu::kAllCategories) {
            if (prmu::category_code(c) == code && config.contains(c)) {
                wanted = true;
            }
        }
        if (wanted) {
            out.insert(out.end(), kp.begin(), kp.end());
        }
    }
    return out;
}

struct BruteDoc {
    std::string id;
    std::map<std::string, double> tf;
    double len = 0;
};

inline std::vector<BruteDoc> brute_docs(const prmu::Corpus& corpus, prmu::IndexConfig config)
{
    std::vector<BruteDoc> docs;
    for (const auto& d : corpus) {
        BruteDoc b{d.id, {}, 0};
        for (const auto& t : indexed_terms(d, config)) {
            b.tf[t] += 1.0;
            b.len += 1.0;
        }
        docs.push_back(std::move(b));
    }
    return docs;
}

struct BruteHit {
    std::string id;
    double score;
};

/// Scores every document against the query and sorts by score then id.
inline std::vector<BruteHit> brute_search(const std::vector<BruteDoc>& docs,
                                          const std::map<std::string, double>& query,
                                          std::size_t k, double k1 = 0.9, double b = 0.4)
{
    const double n = static_cast<double>(docs.size());
    double total = 0;
    for (const auto& d : docs) {
        total += d.len;
    }
    const double avgdl = total / n;
    std::vector<BruteHit> hits;
    for (const auto& d : docs) {
        double score = 0;
        bool matched = false;
        for (const auto& [term, weight] : query) {
            if (weight <= 0) {
                continue;
            }
            auto it = d.tf.find(term);
            if (it == d.tf.end()) {
                continue;
            }
            double df = 0;
            for (const auto& other : docs) {
                df += other.tf.contains(term) ? 1 : 0;
            }
            const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
            const double tf = it->second;
            score += weight * (idf * (tf * (k1 + 1.0)) / (tf + k1 * (1.0 - b + b * d.len / avgdl)));
            matched = true;
        }
        if (matched) {
            hits.push_back({d.id, score});
        }
    }
    std::sort(hits.begin(), hits.end(), [](const BruteHit& x, const BruteHit& y) {
        return x.score != y.score ? x.score > y.score : x.id < y.id;
    });
    if (hits.size() > k) {
        hits.resize(k);
    }
    return hits;
}

/// Relevance model from scratch: score-weighted mixture of document
/// language models, truncated and renormalized.
inline std::map<std::string, double> brute_relevance_model(const std::vector<BruteDoc>& docs,
                                                           const std::vector<BruteHit>& hits,
                                                           std::size_t fb_docs,
                                                           std::size_t fb_terms,
                                                           std::size_t min_len = 2)
{
    const std::size_t n = std::min(fb_docs, hits.size());
    double lowest = 0;
    for (std::size_t i = 0; i < n; ++i) {
        lowest = std::min(lowest, hits[i].score);
    }
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += hits[i].score - lowest;
    }
    std::map<std::string, double> w;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = sum > 0 ? (hits[i].score - lowest) / sum : 1.0 / static_cast<double>(n);
        const BruteDoc* doc = nullptr;
        for (const auto& d : docs) {
            if (d.id == hits[i].id) {
                doc = &d;
            }
        }
        for (const auto& [t, tf] : doc->tf) {
            if (t.size() >= min_len) {
                w[t] += (tf / doc->len) * s;
            }
        }
    }
    std::vector<std::pair<std::string, double>> ranked(w.begin(), w.end());
    std::erase_if(ranked, [](const auto& p) { return p.second <= 0; });
    std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
        return x.second != y.second ? x.second > y.second : x.first < y.first;
    });
    if (ranked.size() > fb_terms) {
        ranked.resize(fb_terms);
    }
    double total = 0;
    for (const auto& [_, v] : ranked) {
        total += v;
    }
    std::map<std::string, double> out;
    for (const auto& [t, v] : ranked) {
        out[t] = v / total;
    }
    return out;
}

/// Student t density integrated with adaptive Simpson quadrature.
inline double student_t_cdf_quadrature(double t, double df)
{
    const double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) /
                     std::sqrt(df * std::numbers::pi);
    auto pdf = [&](double x) { return c * std::pow(1.0 + x * x / df, -(df + 1) / 2); };
    std::function<double(double, double, double, double, double, double, int)> simpson;
    simpson = [&](double a, double b, double fa, double fm, double fb, double whole,
                  int depth) -> double {
        const double m = (a + b) / 2;
        const double lm = (a + m) / 2;
        const double rm = (m + b) / 2;
        const double flm = pdf(lm);
        const double frm = pdf(rm);
        const double left = (m - a) / 6 * (fa + 4 * flm + fm);
        const double right = (b - m) / 6 * (fm + 4 * frm + fb);
        if (depth > 50 || std::abs(left + right - whole) < 1e-14) {
            return left + right + (left + right - whole) / 15;
        }
        return simpson(a, m, fa, flm, fm, left, depth + 1) +
               simpson(m, b, fm, frm, fb, right, depth + 1);
    };
    const double x = std::abs(t);
    if (x == 0) {
        return 0.5;
    }
    // Split the range so the heavy centre is resolved well.
    double area = 0;
    double a = 0;
    for (double b : {std::min(x, 1.0), std::min(x, 4.0), std::min(x, 16.0), x}) {
        if (b > a) {
            const double fa = pdf(a);
            const double fb = pdf(b);
            const double fm = pdf((a + b) / 2);
            area += simpson(a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), 0);
            a = b;
        }
    }
    return t > 0 ? 0.5 + area : 0.5 - area;
}

/// Random corpus over a small vocabulary so that every PRMU category shows
/// up. `vocab` must not exceed 13.
inline prmu::Corpus random_corpus(std::mt19937& rng, std::size_t n_docs, std::size_t vocab = 12,
                                  std::size_t max_len = 20)
{
    std::uniform_int_distribution<std::size_t> word(0, vocab - 1);
    std::uniform_int_distribution<std::size_t> len(1, max_len);
    std::uniform_int_distribution<std::size_t> kp_count(0, 4);
    std::uniform_int_distribution<std::size_t> kp_len(1, 3);
    std::uniform_int_distribution<int> coin(0, 1);
    auto w = [&](std::size_t i) { return std::string("w") + static_cast<char>('a' + i) + "x"; };
    prmu::Corpus corpus;
    for (std::size_t d = 0; d < n_docs; ++d) {
        std::string title;
        std::string abstract;
        for (std::size_t i = 0, n = len(rng) / 3 + 1; i < n; ++i) {
            title += w(word(rng)) + " ";
        }
        for (std::size_t i = 0, n = len(rng); i < n; ++i) {
            abstract += w(word(rng)) + " ";
        }
        std::vector<std::string> kps;
        for (std::size_t k = 0, n = kp_count(rng); k < n; ++k) {
            std::string kp;
            for (std::size_t i = 0, m = kp_len(rng); i < m; ++i) {
                // Half the words come from a disjoint pool the documents never use.
                kp += (coin(rng) ? w(word(rng)) : w(vocab + word(rng))) + " ";
            }
            kps.push_back(kp);
        }
        char id[16];
        std::snprintf(id, sizeof(id), "d%03zu", (d * 37) % 1000);
        corpus.push_back(prmu::Document::make(id, title, abstract, kps));
    }
    return corpus;
}

}  // namespace oracle
