#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "document.hpp"

namespace prmu {

/// Bad or missing input: unreadable file, malformed record, failed validation.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline InputError input_error(const std::string& path, std::size_t line, const std::string& what)
{
    return InputError(path + ":" + std::to_string(line) + ": " + what);
}

struct Topic {
    std::string id;
    std::string text;

    friend bool operator==(const Topic&, const Topic&) = default;
};

/// (topic id, doc id) -> relevance grade. A document is relevant at grade >= 1.
class Qrels {
public:
    void set(const std::string& topic, const std::string& doc, int grade)
    {
        grades_[topic][doc] = grade;
    }

    [[nodiscard]] int grade(const std::string& topic, const std::string& doc) const
    {
        auto t = grades_.find(topic);
        if (t == grades_.end()) {
            return 0;
        }
        auto d = t->second.find(doc);
        return d == t->second.end() ? 0 : d->second;
    }

    [[nodiscard]] std::set<std::string> relevant(const std::string& topic) const
    {
        std::set<std::string> out;
        if (auto t = grades_.find(topic); t != grades_.end()) {
            for (const auto& [doc, g] : t->second) {
                if (g >= 1) {
                    out.insert(doc);
                }
            }
        }
        return out;
    }

    /// Judged topics, sorted.
    [[nodiscard]] std::vector<std::string> topics() const
    {
        std::vector<std::string> out;
        for (const auto& [t, _] : grades_) {
            out.push_back(t);
        }
        return out;
    }

    friend bool operator==(const Qrels&, const Qrels&) = default;

private:
    std::map<std::string, std::map<std::string, int>> grades_;
};

struct RunEntry {
    std::string doc_id;
    double score = 0.0;
    std::size_t rank = 0;  // 1-based

    friend bool operator==(const RunEntry&, const RunEntry&) = default;
};

struct RunList {
    std::string tag;
    std::map<std::string, std::vector<RunEntry>> topics;

    [[nodiscard]] const std::vector<RunEntry>* find(const std::string& topic) const
    {
        auto it = topics.find(topic);
        return it == topics.end() ? nullptr : &it->second;
    }

    friend bool operator==(const RunList&, const RunList&) = default;
};

namespace detail {

inline std::ifstream open_input(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open '" + path + "'");
    }
    return in;
}

inline std::vector<std::string_view> split_ws(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) {
            ++j;
        }
        if (j > i) {
            out.push_back(line.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

inline bool is_blank(std::string_view line)
{
    return std::all_of(line.begin(), line.end(),
                       [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

template <typename T>
bool parse_number(std::string_view s, T& out)
{
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

inline std::string format_double(double v)
{
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

inline std::string string_field(const nlohmann::json& obj, const char* key, bool required,
                                const std::string& path, std::size_t line)
{
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        if (required) {
            throw input_error(path, line, std::string("missing field \"") + key + "\"");
        }
        return {};
    }
    if (!it->is_string()) {
        throw input_error(path, line, std::string("field \"") + key + "\" must be a string");
    }
    return it->get<std::string>();
}

inline std::vector<std::string> string_list_field(const nlohmann::json& obj, const char* key,
                                                  const std::string& path, std::size_t line)
{
    std::vector<std::string> out;
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        return out;
    }
    if (!it->is_array()) {
        throw input_error(path, line, std::string("field \"") + key + "\" must be an array");
    }
    for (const auto& v : *it) {
        if (!v.is_string()) {
            throw input_error(path, line,
                              std::string("field \"") + key + "\" must contain only strings");
        }
        out.push_back(v.get<std::string>());
    }
    return out;
}

inline nlohmann::json parse_json_line(const std::string& text, const std::string& path,
                                      std::size_t line)
{
    nlohmann::json obj;
    try {
        obj = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw input_error(path, line, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) {
        throw input_error(path, line, "expected a JSON object");
    }
    return obj;
}

}  // namespace detail

/// JSON Lines, one {"id", "title", "abstract", "keyphrases"} object per line.
/// Only "id" is required; blank lines are ignored.
inline Corpus read_corpus(std::istream& in, const std::string& path = "<corpus>")
{
    Corpus corpus;
    std::unordered_set<std::string> seen;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (detail::is_blank(text)) {
            continue;
        }
        auto obj = detail::parse_json_line(text, path, line);
        std::string id = detail::string_field(obj, "id", true, path, line);
        if (id.empty()) {
            throw input_error(path, line, "empty document id");
        }
        if (!seen.insert(id).second) {
            throw input_error(path, line, "duplicate document id '" + id + "'");
        }
        corpus.push_back(Document::make(std::move(id),
                                        detail::string_field(obj, "title", false, path, line),
                                        detail::string_field(obj, "abstract", false, path, line),
                                        detail::string_list_field(obj, "keyphrases", path, line)));
    }
    return corpus;
}

inline Corpus load_corpus(const std::string& path)
{
    auto in = detail::open_input(path);
    return read_corpus(in, path);
}

/// Tab-separated "id<TAB>query text", one topic per line.
inline std::vector<Topic> load_topics(const std::string& path)
{
    auto in = detail::open_input(path);
    std::vector<Topic> topics;
    std::unordered_set<std::string> seen;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (!text.empty() && text.back() == '\r') {
            text.pop_back();
        }
        if (detail::is_blank(text)) {
            continue;
        }
        auto tab = text.find('\t');
        if (tab == std::string::npos) {
            throw input_error(path, line, "expected \"id<TAB>text\"");
        }
        Topic topic{text.substr(0, tab), text.substr(tab + 1)};
        if (topic.id.empty() || detail::is_blank(topic.text)) {
            throw input_error(path, line, "topic id and text must be non-empty");
        }
        if (!seen.insert(topic.id).second) {
            throw input_error(path, line, "duplicate topic id '" + topic.id + "'");
        }
        topics.push_back(std::move(topic));
    }
    return topics;
}

/// TREC qrels: "topic iteration doc grade".
inline Qrels load_qrels(const std::string& path)
{
    auto in = detail::open_input(path);
    Qrels qrels;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        auto fields = detail::split_ws(text);
        if (fields.empty()) {
            continue;
        }
        int grade = 0;
        if (fields.size() != 4 || !detail::parse_number(fields[3], grade)) {
            throw input_error(path, line, "expected \"topic iteration doc grade\"");
        }
        if (grade < 0) {
            throw input_error(path, line, "negative relevance grade");
        }
        qrels.set(std::string(fields[0]), std::string(fields[2]), grade);
    }
    return qrels;
}

/// Writes "topic Q0 doc rank score tag" lines, topics in sorted order.
inline void write_run(const RunList& run, std::ostream& out)
{
    const std::string tag = run.tag.empty() ? "prmu" : run.tag;
    for (const auto& [topic, entries] : run.topics) {
        for (const auto& e : entries) {
            out << topic << " Q0 " << e.doc_id << ' ' << e.rank << ' '
                << detail::format_double(e.score) << ' ' << tag << '\n';
        }
    }
}

inline void write_run(const RunList& run, const std::string& path)
{
    std::ofstream out(path);
    if (!out) {
        throw InputError("cannot write '" + path + "'");
    }
    write_run(run, out);
    if (!out) {
        throw InputError("error while writing '" + path + "'");
    }
}

inline RunList load_run(const std::string& path)
{
    auto in = detail::open_input(path);
    RunList run;
    std::map<std::string, std::set<std::string>> docs_seen;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        auto f = detail::split_ws(text);
        if (f.empty()) {
            continue;
        }
        RunEntry e;
        if (f.size() != 6 || !detail::parse_number(f[3], e.rank) ||
            !detail::parse_number(f[4], e.score)) {
            throw input_error(path, line, "expected \"topic Q0 doc rank score tag\"");
        }
        if (e.rank == 0) {
            throw input_error(path, line, "ranks start at 1");
        }
        std::string topic(f[0]);
        e.doc_id = std::string(f[2]);
        if (run.tag.empty()) {
            run.tag = std::string(f[5]);
        }
        if (!docs_seen[topic].insert(e.doc_id).second) {
            throw input_error(path, line,
                              "document '" + e.doc_id + "' listed twice for topic '" + topic + "'");
        }
        run.topics[topic].push_back(std::move(e));
    }
    for (auto& [topic, entries] : run.topics) {
        std::stable_sort(entries.begin(), entries.end(),
                         [](const RunEntry& a, const RunEntry& b) { return a.rank < b.rank; });
        for (std::size_t i = 1; i < entries.size(); ++i) {
            if (entries[i].rank == entries[i - 1].rank) {
                throw InputError(path + ": topic '" + topic + "' repeats rank " +
                                 std::to_string(entries[i].rank));
            }
            if (entries[i].score > entries[i - 1].score) {
                throw InputError(path + ": topic '" + topic + "' has scores increasing with rank");
            }
        }
    }
    return run;
}

/// Ranked keyphrase predictions for one document.
struct Prediction {
    std::string doc_id;
    std::vector<std::string> keyphrases;
};

/// JSON Lines of {"id": doc id, "keyphrases": [ranked predictions]}.
inline std::vector<Prediction> load_predictions(const std::string& path)
{
    auto in = detail::open_input(path);
    std::vector<Prediction> out;
    std::unordered_set<std::string> seen;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (detail::is_blank(text)) {
            continue;
        }
        auto obj = detail::parse_json_line(text, path, line);
        Prediction p{detail::string_field(obj, "id", true, path, line),
                     detail::string_list_field(obj, "keyphrases", path, line)};
        if (!seen.insert(p.doc_id).second) {
            throw input_error(path, line, "duplicate predictions for document '" + p.doc_id + "'");
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace prmu
