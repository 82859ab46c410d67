#pragma once

#include <cmath>
#include <cstdio>
#include <future>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "corpus.hpp"
#include "eval.hpp"
#include "expansion.hpp"
#include "index.hpp"
#include "ranking.hpp"

namespace prmu {

/// One indexing configuration of an experiment.
struct ExperimentRow {
    std::string key;    // as written in the row list, e.g. "expand"
    std::string label;  // display name, e.g. "+Expand (M+U)"
    IndexConfig config;
};

inline ExperimentRow make_row(std::string_view key)
{
    static const std::map<std::string, std::string, std::less<>> labels = {
        {"baseline", "title & abstract"}, {"p", "+Present"},
        {"r", "+Reordered"},              {"m", "+Mixed"},
        {"u", "+Unseen"},                 {"absent", "+Absent (R+M+U)"},
        {"highlight", "+Highlight (P+R)"}, {"expand", "+Expand (M+U)"},
        {"all", "+all (P+R+M+U)"},
    };
    std::string lower;
    for (char c : key) {
        lower += static_cast<char>(c >= 'A' && c <= 'Z' ? c + 32 : c);
    }
    ExperimentRow row{lower, {}, IndexConfig::parse(lower)};
    if (auto it = labels.find(lower); it != labels.end()) {
        row.label = it->second;
    } else if (row.config.empty()) {
        row.label = "title & abstract";
    } else {
        for (char c : row.config.codes()) {
            row.label += std::string("+") + c;
        }
    }
    return row;
}

/// The nine configurations: baseline, each category alone, then the
/// absent, highlight, expand and all groupings.
inline std::vector<ExperimentRow> default_rows()
{
    std::vector<ExperimentRow> rows;
    for (const char* key :
         {"baseline", "P", "R", "M", "U", "absent", "highlight", "expand", "all"}) {
        rows.push_back(make_row(key));
    }
    return rows;
}

struct ExperimentSpec {
    std::string corpus_path;
    std::string topics_path;
    std::string qrels_path;
    Metric metric = Metric::parse("map@1000");
    std::vector<ExperimentRow> rows = default_rows();
    Bm25Params bm25;
    Rm3Params rm3;
    /// Documents retrieved per topic.
    std::size_t depth = 1000;
    std::string output_dir;
    std::size_t jobs = 1;

    void validate() const
    {
        if (rows.empty()) {
            throw std::invalid_argument("experiment needs at least one row");
        }
        std::size_t baselines = 0;
        std::set<std::string> keys;
        for (const auto& r : rows) {
            baselines += r.config.empty() ? 1 : 0;
            if (!keys.insert(r.key).second) {
                throw std::invalid_argument("duplicate experiment row '" + r.key + "'");
            }
        }
        if (baselines != 1) {
            throw std::invalid_argument("experiment needs exactly one title & abstract row");
        }
        if (depth == 0) {
            throw std::invalid_argument("retrieval depth must be at least 1");
        }
        bm25.validate();
        rm3.validate();
    }
};

/// Reads "key = value" lines; '#' starts a comment. Keys: corpus, topics,
/// qrels, metric, rows, k1, b, fb_docs, fb_terms, orig_weight,
/// min_term_length, fb_weighting (score|uniform), depth, output, jobs.
inline ExperimentSpec parse_experiment_config(std::istream& in, const std::string& path = "<config>",
                                              ExperimentSpec spec = {})
{
    auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t\r");
        auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    auto as_size = [&](const std::string& v, std::size_t line) {
        std::size_t out = 0;
        if (!detail::parse_number(v, out)) {
            throw input_error(path, line, "expected a non-negative integer, got '" + v + "'");
        }
        return out;
    };
    auto as_double = [&](const std::string& v, std::size_t line) {
        double out = 0;
        if (!detail::parse_number(v, out)) {
            throw input_error(path, line, "expected a number, got '" + v + "'");
        }
        return out;
    };
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (auto hash = text.find('#'); hash != std::string::npos) {
            text.resize(hash);
        }
        text = trim(text);
        if (text.empty()) {
            continue;
        }
        auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw input_error(path, line, "expected \"key = value\"");
        }
        std::string key = trim(text.substr(0, eq));
        std::string value = trim(text.substr(eq + 1));
        try {
            if (key == "corpus") {
                spec.corpus_path = value;
            } else if (key == "topics") {
                spec.topics_path = value;
            } else if (key == "qrels") {
                spec.qrels_path = value;
            } else if (key == "metric") {
                spec.metric = Metric::parse(value);
            } else if (key == "rows") {
                spec.rows.clear();
                std::stringstream ss(value);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    if (!trim(item).empty()) {
                        spec.rows.push_back(make_row(trim(item)));
                    }
                }
            } else if (key == "k1") {
                spec.bm25.k1 = as_double(value, line);
            } else if (key == "b") {
                spec.bm25.b = as_double(value, line);
            } else if (key == "fb_docs") {
                spec.rm3.fb_docs = as_size(value, line);
            } else if (key == "fb_terms") {
                spec.rm3.fb_terms = as_size(value, line);
            } else if (key == "orig_weight") {
                spec.rm3.orig_weight = as_double(value, line);
            } else if (key == "min_term_length") {
                spec.rm3.min_term_length = as_size(value, line);
            } else if (key == "fb_weighting") {
                if (value == "score") {
                    spec.rm3.weighting = FeedbackWeighting::Score;
                } else if (value == "uniform") {
                    spec.rm3.weighting = FeedbackWeighting::Uniform;
                } else {
                    throw input_error(path, line, "fb_weighting must be score or uniform");
                }
            } else if (key == "depth") {
                spec.depth = as_size(value, line);
            } else if (key == "output") {
                spec.output_dir = value;
            } else if (key == "jobs") {
                spec.jobs = as_size(value, line);
            } else {
                throw input_error(path, line, "unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument& e) {
            throw input_error(path, line, e.what());
        }
    }
    return spec;
}

struct RankerResult {
    EvalReport eval;
    std::optional<SignificanceResult> vs_baseline;
    std::optional<SignificanceResult> vs_present;
};

struct RowResult {
    ExperimentRow row;
    double kp_appended = 0.0;
    RankerResult bm25;
    RankerResult rm3;
};

struct ExperimentReport {
    ExperimentSpec spec;
    std::vector<RowResult> rows;
};

struct RowRuns {
    RunList bm25;
    RunList rm3;
    double kp_appended = 0.0;
};

/// Builds the row's index and retrieves every topic with BM25 and BM25+RM3.
inline RowRuns run_row(const ExperimentSpec& spec, const ExperimentRow& row, const Corpus& corpus,
                       const std::vector<Topic>& topics)
{
    const InvertedIndex index = InvertedIndex::build(corpus, row.config);
    RowRuns out;
    out.kp_appended = index.kp_appended();
    out.bm25.tag = "bm25-" + row.key;
    out.rm3.tag = "bm25rm3-" + row.key;
    for (const auto& topic : topics) {
        const QueryModel query = QueryModel::from_text(topic.text);
        out.bm25.topics[topic.id] = to_run_entries(search(index, query, spec.depth, spec.bm25));
        out.rm3.topics[topic.id] =
            to_run_entries(search_rm3(index, query, spec.bm25, spec.rm3, spec.depth));
    }
    return out;
}

inline ExperimentReport run_experiment(const ExperimentSpec& spec, const Corpus& corpus,
                                       const std::vector<Topic>& topics, const Qrels& qrels)
{
    spec.validate();
    if (corpus.empty()) {
        throw std::invalid_argument("experiment corpus is empty");
    }
    std::vector<RowRuns> runs(spec.rows.size());
    if (spec.jobs > 1) {
        std::vector<std::future<RowRuns>> pending;
        std::size_t next = 0;
        while (next < spec.rows.size()) {
            pending.clear();
            std::size_t batch_start = next;
            for (; next < spec.rows.size() && pending.size() < spec.jobs; ++next) {
                pending.push_back(std::async(std::launch::async, [&, next] {
                    return run_row(spec, spec.rows[next], corpus, topics);
                }));
            }
            for (std::size_t i = 0; i < pending.size(); ++i) {
                runs[batch_start + i] = pending[i].get();
            }
        }
    } else {
        for (std::size_t i = 0; i < spec.rows.size(); ++i) {
            runs[i] = run_row(spec, spec.rows[i], corpus, topics);
        }
    }

    ExperimentReport report{spec, {}};
    for (std::size_t i = 0; i < spec.rows.size(); ++i) {
        RowResult r;
        r.row = spec.rows[i];
        r.kp_appended = runs[i].kp_appended;
        r.bm25.eval = evaluate(runs[i].bm25, qrels, spec.metric);
        r.rm3.eval = evaluate(runs[i].rm3, qrels, spec.metric);
        report.rows.push_back(std::move(r));
    }

    std::optional<std::size_t> baseline;
    std::optional<std::size_t> present;
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const IndexConfig c = report.rows[i].row.config;
        if (c.empty()) {
            baseline = i;
        } else if (c == IndexConfig{Category::Present}) {
            present = i;
        }
    }
    auto compare = [&](RankerResult RowResult::*ranker, std::size_t i,
                       std::optional<std::size_t> ref) -> std::optional<SignificanceResult> {
        if (!ref || *ref == i) {
            return std::nullopt;
        }
        const auto& a = (report.rows[i].*ranker).eval;
        const auto& b = (report.rows[*ref].*ranker).eval;
        if (a.per_topic.size() < 2) {
            return std::nullopt;
        }
        return paired_t_test(a, b);
    };
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        for (auto ranker : {&RowResult::bm25, &RowResult::rm3}) {
            (report.rows[i].*ranker).vs_baseline = compare(ranker, i, baseline);
            (report.rows[i].*ranker).vs_present = compare(ranker, i, present);
        }
    }
    return report;
}

inline ExperimentReport run_experiment(const ExperimentSpec& spec)
{
    Corpus corpus = load_corpus(spec.corpus_path);
    auto topics = load_topics(spec.topics_path);
    Qrels qrels = load_qrels(spec.qrels_path);
    return run_experiment(spec, corpus, topics, qrels);
}

/// Rounds to six decimals so reports are stable across platforms.
inline double report_round(double v)
{
    return std::round(v * 1e6) / 1e6;
}

inline nlohmann::json significance_json(const std::optional<SignificanceResult>& s)
{
    if (!s) {
        return nullptr;
    }
    nlohmann::json j;
    j["t"] = std::isfinite(s->t_statistic) ? nlohmann::json(report_round(s->t_statistic))
                                           : nlohmann::json(nullptr);
    j["p"] = report_round(s->p_value);
    j["n"] = s->n;
    j["significant"] = s->significant;
    j["degenerate_variance"] = s->degenerate_variance;
    return j;
}

inline nlohmann::json ranker_json(const RankerResult& r)
{
    nlohmann::json j;
    j["score"] = report_round(r.eval.aggregate);
    nlohmann::json per_topic = nlohmann::json::object();
    for (const auto& [topic, s] : r.eval.per_topic) {
        per_topic[topic] = report_round(s);
    }
    j["per_topic"] = std::move(per_topic);
    j["vs_baseline"] = significance_json(r.vs_baseline);
    j["vs_present"] = significance_json(r.vs_present);
    return j;
}

/// Machine-readable report: sorted keys, no timestamps, six-decimal values.
inline nlohmann::json report_json(const ExperimentReport& report)
{
    const auto& spec = report.spec;
    nlohmann::json cfg;
    cfg["corpus"] = spec.corpus_path;
    cfg["topics"] = spec.topics_path;
    cfg["qrels"] = spec.qrels_path;
    cfg["metric"] = spec.metric.name();
    cfg["depth"] = spec.depth;
    cfg["bm25"] = {{"k1", spec.bm25.k1}, {"b", spec.bm25.b}};
    cfg["rm3"] = {{"fb_docs", spec.rm3.fb_docs},
                  {"fb_terms", spec.rm3.fb_terms},
                  {"orig_weight", spec.rm3.orig_weight},
                  {"min_term_length", spec.rm3.min_term_length},
                  {"fb_weighting",
                   spec.rm3.weighting == FeedbackWeighting::Score ? "score" : "uniform"}};

    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        nlohmann::json row;
        row["key"] = r.row.key;
        row["label"] = r.row.label;
        row["categories"] = r.row.config.codes();
        row["kp"] = report_round(r.kp_appended);
        row["bm25"] = ranker_json(r.bm25);
        row["bm25+rm3"] = ranker_json(r.rm3);
        rows.push_back(std::move(row));
    }
    nlohmann::json j;
    j["config"] = std::move(cfg);
    j["topics_evaluated"] = report.rows.empty() ? 0 : report.rows.front().bm25.eval.topic_count();
    j["rows"] = std::move(rows);
    return j;
}

/// Aligned table with scores in percent. Markers: "+" significant over the
/// title & abstract row, "*" significant over the Present row (p < 0.05).
inline std::string report_table(const ExperimentReport& report)
{
    auto cell = [](const RankerResult& r) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * r.eval.aggregate);
        std::string s = buf;
        s += (r.vs_baseline && r.vs_baseline->significant) ? "+" : " ";
        s += (r.vs_present && r.vs_present->significant) ? "*" : " ";
        return s;
    };
    std::ostringstream out;
    const std::string metric = report.spec.metric.name();
    out << std::left << std::setw(20) << "index" << std::right << std::setw(10) << "BM25"
        << std::setw(10) << "+RM3" << std::setw(6) << "#kp" << "   (" << metric << ")\n";
    out << std::string(46, '-') << '\n';
    for (const auto& r : report.rows) {
        char kp[16];
        if (r.row.config.empty()) {
            std::snprintf(kp, sizeof(kp), "-");
        } else {
            std::snprintf(kp, sizeof(kp), "%.1f", r.kp_appended);
        }
        out << std::left << std::setw(20) << r.row.label << std::right << std::setw(10)
            << cell(r.bm25) << std::setw(10) << cell(r.rm3) << std::setw(6) << kp << '\n';
    }
    out << "+ significant vs title & abstract, * significant vs +Present (paired t-test, "
           "p < 0.05)\n";
    return out.str();
}

}  // namespace prmu
