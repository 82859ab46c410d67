#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "classify.hpp"
#include "corpus.hpp"
#include "log.hpp"

namespace prmu {

enum class FAveraging { Macro, Micro };

struct GenEvalReport {
    std::size_t k = 5;
    double pct[4] = {0, 0, 0, 0};  // indexed by Category, over classified top-k predictions
    double f_at_k = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    std::size_t n_docs = 0;            // documents contributing to F
    std::size_t n_predictions = 0;     // classified top-k predictions
    std::size_t n_short_lists = 0;     // documents with fewer than k predictions
    std::size_t n_skipped_no_gold = 0;
    FAveraging averaging = FAveraging::Macro;

    [[nodiscard]] double percent(Category c) const { return pct[static_cast<int>(c)]; }
};

namespace detail {
inline std::vector<TermSeq> distinct_normalized(const std::vector<std::string>& phrases)
{
    std::vector<TermSeq> out;
    std::set<TermSeq> seen;
    for (const auto& p : phrases) {
        TermSeq terms = normalize(p);
        if (!terms.empty() && seen.insert(terms).second) {
            out.push_back(std::move(terms));
        }
    }
    return out;
}

inline double f1(double p, double r)
{
    return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}
}  // namespace detail

/// Grades ranked keyphrase predictions against each document's gold
/// keyphrases. Predictions and gold are compared as stemmed term sequences
/// after dropping duplicates; only the first k distinct predictions count.
/// Precision divides by the number of predictions actually emitted (at most k).
inline GenEvalReport grade_generation(const std::vector<Prediction>& predictions,
                                      const Corpus& corpus, std::size_t k = 5,
                                      FAveraging averaging = FAveraging::Macro)
{
    if (k == 0) {
        throw std::invalid_argument("grade_generation: k must be at least 1");
    }
    std::map<std::string, const Document*> by_id;
    for (const auto& d : corpus) {
        by_id.emplace(d.id, &d);
    }
    std::vector<std::string> unknown;
    for (const auto& p : predictions) {
        if (!by_id.contains(p.doc_id)) {
            unknown.push_back(p.doc_id);
        }
    }
    if (!unknown.empty()) {
        std::string msg = "predictions reference unknown documents:";
        for (const auto& id : unknown) {
            msg += " " + id;
        }
        throw InputError(msg);
    }

    GenEvalReport report;
    report.k = k;
    report.averaging = averaging;
    std::uint64_t per_category[4] = {0, 0, 0, 0};
    double f_sum = 0.0;
    double p_sum = 0.0;
    double r_sum = 0.0;
    std::size_t matched_total = 0;
    std::size_t emitted_total = 0;
    std::size_t gold_total = 0;

    for (const auto& pred : predictions) {
        const Document& doc = *by_id.at(pred.doc_id);
        auto top = detail::distinct_normalized(pred.keyphrases);
        if (top.size() > k) {
            top.resize(k);
        }
        if (top.size() < k) {
            ++report.n_short_lists;
        }
        DocumentMatcher matcher(doc.terms);
        for (const auto& kp : top) {
            ++per_category[static_cast<int>(matcher.classify(kp))];
        }
        report.n_predictions += top.size();

        auto gold_list = detail::distinct_normalized(doc.keyphrases);
        if (gold_list.empty()) {
            ++report.n_skipped_no_gold;
            continue;
        }
        std::set<TermSeq> gold(gold_list.begin(), gold_list.end());
        std::size_t matched = 0;
        for (const auto& kp : top) {
            matched += gold.contains(kp) ? 1 : 0;
        }
        const double p = top.empty() ? 0.0 : static_cast<double>(matched) / top.size();
        const double r = static_cast<double>(matched) / gold.size();
        p_sum += p;
        r_sum += r;
        f_sum += detail::f1(p, r);
        matched_total += matched;
        emitted_total += top.size();
        gold_total += gold.size();
        ++report.n_docs;
    }
    if (report.n_skipped_no_gold > 0) {
        warn(std::to_string(report.n_skipped_no_gold) +
             " document(s) without gold keyphrases excluded from F@k");
    }
    if (report.n_short_lists > 0) {
        warn(std::to_string(report.n_short_lists) + " document(s) have fewer than " +
             std::to_string(k) + " predictions; precision uses the emitted count");
    }

    if (report.n_predictions > 0) {
        for (int i = 0; i < 4; ++i) {
            report.pct[i] = 100.0 * static_cast<double>(per_category[i]) /
                            static_cast<double>(report.n_predictions);
        }
    }
    if (report.n_docs > 0) {
        if (averaging == FAveraging::Macro) {
            const double n = static_cast<double>(report.n_docs);
            report.precision = p_sum / n;
            report.recall = r_sum / n;
            report.f_at_k = f_sum / n;
        } else {
            report.precision =
                emitted_total ? static_cast<double>(matched_total) / emitted_total : 0.0;
            report.recall = static_cast<double>(matched_total) / gold_total;
            report.f_at_k = detail::f1(report.precision, report.recall);
        }
    }
    return report;
}

}  // namespace prmu
