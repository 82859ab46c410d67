#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "corpus.hpp"
#include "log.hpp"

namespace prmu {

/// Average precision: sum of precision at each relevant rank within the
/// cutoff, divided by the number of relevant documents.
inline double average_precision(const std::vector<std::string>& ranked,
                                const std::set<std::string>& relevant, std::size_t cutoff)
{
    if (relevant.empty()) {
        throw std::invalid_argument("average_precision: empty relevant set");
    }
    double sum = 0.0;
    std::size_t hits = 0;
    const std::size_t depth = std::min(cutoff, ranked.size());
    for (std::size_t i = 0; i < depth; ++i) {
        if (relevant.contains(ranked[i])) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(i + 1);
        }
    }
    return sum / static_cast<double>(relevant.size());
}

inline double recall_at_k(const std::vector<std::string>& ranked,
                          const std::set<std::string>& relevant, std::size_t k)
{
    if (relevant.empty()) {
        throw std::invalid_argument("recall_at_k: empty relevant set");
    }
    std::size_t hits = 0;
    const std::size_t depth = std::min(k, ranked.size());
    for (std::size_t i = 0; i < depth; ++i) {
        hits += relevant.contains(ranked[i]) ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(relevant.size());
}

/// "map@K" or "recall@K".
struct Metric {
    enum class Kind { AveragePrecision, Recall };

    Kind kind = Kind::AveragePrecision;
    std::size_t cutoff = 1000;

    static Metric parse(std::string_view text)
    {
        auto at = text.find('@');
        if (at == std::string_view::npos) {
            throw std::invalid_argument("metric must look like map@1000 or recall@10");
        }
        std::string_view name = text.substr(0, at);
        Metric m;
        if (name == "map") {
            m.kind = Kind::AveragePrecision;
        } else if (name == "recall") {
            m.kind = Kind::Recall;
        } else {
            throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
        }
        if (!detail::parse_number(text.substr(at + 1), m.cutoff) || m.cutoff == 0) {
            throw std::invalid_argument("bad metric cutoff in '" + std::string(text) + "'");
        }
        return m;
    }

    [[nodiscard]] std::string name() const
    {
        return (kind == Kind::AveragePrecision ? "map@" : "recall@") + std::to_string(cutoff);
    }

    [[nodiscard]] double score(const std::vector<std::string>& ranked,
                               const std::set<std::string>& relevant) const
    {
        return kind == Kind::AveragePrecision ? average_precision(ranked, relevant, cutoff)
                                              : recall_at_k(ranked, relevant, cutoff);
    }
};

struct EvalReport {
    std::string metric;
    std::size_t cutoff = 0;
    std::map<std::string, double> per_topic;
    double aggregate = 0.0;

    [[nodiscard]] std::size_t topic_count() const { return per_topic.size(); }
};

/// Scores every judged topic that has at least one relevant document.
/// Topics missing from the run score 0.
inline EvalReport evaluate(const RunList& run, const Qrels& qrels, const Metric& metric)
{
    EvalReport report{metric.name(), metric.cutoff, {}, 0.0};
    for (const auto& topic : qrels.topics()) {
        auto relevant = qrels.relevant(topic);
        if (relevant.empty()) {
            warn("topic '" + topic + "' has no relevant documents; skipped");
            continue;
        }
        std::vector<std::string> ranked;
        if (const auto* entries = run.find(topic)) {
            ranked.reserve(entries->size());
            for (const auto& e : *entries) {
                ranked.push_back(e.doc_id);
            }
        }
        report.per_topic[topic] = metric.score(ranked, relevant);
    }
    double sum = 0.0;
    for (const auto& [_, s] : report.per_topic) {
        sum += s;
    }
    if (!report.per_topic.empty()) {
        report.aggregate = sum / static_cast<double>(report.per_topic.size());
    }
    return report;
}

namespace detail {

// Continued fraction for the incomplete beta function (modified Lentz).
inline double beta_continued_fraction(double a, double b, double x)
{
    constexpr int kMaxIter = 10000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) {
        d = kTiny;
    }
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) {
            d = kTiny;
        }
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) {
            c = kTiny;
        }
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) {
            d = kTiny;
        }
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) {
            c = kTiny;
        }
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) {
            break;
        }
    }
    return h;
}

}  // namespace detail

/// Regularized incomplete beta function I_x(a, b).
inline double incomplete_beta(double a, double b, double x)
{
    if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0 && x <= 1.0)) {
        throw std::invalid_argument("incomplete_beta: need a, b > 0 and x in [0, 1]");
    }
    if (x == 0.0 || x == 1.0) {
        return x;
    }
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * detail::beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

/// CDF of Student's t distribution with `df` degrees of freedom.
inline double student_t_cdf(double t, double df)
{
    if (!(df > 0.0)) {
        throw std::invalid_argument("student_t_cdf: df must be positive");
    }
    if (std::isinf(t)) {
        return t > 0 ? 1.0 : 0.0;
    }
    const double tail = 0.5 * incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
    return t > 0 ? 1.0 - tail : tail;
}

/// P(|T| >= |t|).
inline double two_tailed_p(double t, double df)
{
    if (std::isinf(t)) {
        return 0.0;
    }
    return incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

struct SignificanceResult {
    double t_statistic = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
    bool significant = false;
    /// Differences were constant and non-zero: t is infinite, p is 0.
    bool degenerate_variance = false;
};

inline constexpr double kSignificanceLevel = 0.05;

/// Two-tailed Student's paired t-test on per-topic score pairs.
inline SignificanceResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b)
{
    if (a.size() != b.size()) {
        throw std::invalid_argument("paired_t_test: score vectors differ in length");
    }
    if (a.size() < 2) {
        throw std::invalid_argument("paired_t_test: need at least two pairs");
    }
    const std::size_t n = a.size();
    std::vector<double> d(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = a[i] - b[i];
        sum += d[i];
    }
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double x : d) {
        ss += (x - mean) * (x - mean);
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));

    SignificanceResult r;
    r.n = n;
    if (sd == 0.0) {
        if (mean == 0.0) {
            r.t_statistic = 0.0;
            r.p_value = 1.0;
        } else {
            r.t_statistic = mean > 0 ? std::numeric_limits<double>::infinity()
                                     : -std::numeric_limits<double>::infinity();
            r.p_value = 0.0;
            r.degenerate_variance = true;
        }
    } else {
        r.t_statistic = mean / (sd / std::sqrt(static_cast<double>(n)));
        r.p_value = two_tailed_p(r.t_statistic, static_cast<double>(n - 1));
    }
    r.significant = r.p_value < kSignificanceLevel;
    return r;
}

/// Pairs two evaluations by topic id. Both must cover the same topics.
inline SignificanceResult paired_t_test(const EvalReport& a, const EvalReport& b)
{
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& [topic, s] : a.per_topic) {
        auto it = b.per_topic.find(topic);
        if (it == b.per_topic.end()) {
            throw std::invalid_argument("paired_t_test: topic '" + topic + "' missing from one run");
        }
        xs.push_back(s);
        ys.push_back(it->second);
    }
    if (a.per_topic.size() != b.per_topic.size()) {
        throw std::invalid_argument("paired_t_test: runs cover different topics");
    }
    return paired_t_test(xs, ys);
}

}  // namespace prmu
