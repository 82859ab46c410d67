#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "classify.hpp"
#include "corpus.hpp"
#include "document.hpp"

namespace prmu {

/// Which keyphrase categories get appended to each document before indexing.
/// The empty set indexes title and abstract only.
class IndexConfig {
public:
    constexpr IndexConfig() = default;

    constexpr IndexConfig(std::initializer_list<Category> cats)
    {
        for (Category c : cats) {
            mask_ |= bit(c);
        }
    }

    [[nodiscard]] constexpr bool contains(Category c) const { return (mask_ & bit(c)) != 0; }
    [[nodiscard]] constexpr bool empty() const { return mask_ == 0; }
    [[nodiscard]] constexpr std::uint8_t mask() const { return mask_; }

    [[nodiscard]] constexpr IndexConfig with(Category c) const
    {
        IndexConfig out = *this;
        out.mask_ |= bit(c);
        return out;
    }

    [[nodiscard]] constexpr IndexConfig without(Category c) const
    {
        IndexConfig out = *this;
        out.mask_ &= static_cast<std::uint8_t>(~bit(c));
        return out;
    }

    /// Category letters in P, R, M, U order, or "none".
    [[nodiscard]] std::string codes() const
    {
        std::string out;
        for (Category c : kAllCategories) {
            if (contains(c)) {
                out += category_code(c);
            }
        }
        return out.empty() ? "none" : out;
    }

    /// Accepts "none", "baseline", "absent", "highlight", "expand", "all",
    /// or categories separated by ',' or '+' ("P+R", "mixed,unseen").
    static IndexConfig parse(std::string_view text)
    {
        std::string lower;
        for (char c : text) {
            lower += static_cast<char>(c >= 'A' && c <= 'Z' ? c + 32 : c);
        }
        if (lower.empty() || lower == "none" || lower == "baseline") {
            return {};
        }
        if (lower == "absent") {
            return {Category::Reordered, Category::Mixed, Category::Unseen};
        }
        if (lower == "highlight") {
            return {Category::Present, Category::Reordered};
        }
        if (lower == "expand") {
            return {Category::Mixed, Category::Unseen};
        }
        if (lower == "all") {
            return {Category::Present, Category::Reordered, Category::Mixed, Category::Unseen};
        }
        IndexConfig out;
        std::size_t start = 0;
        while (start <= lower.size()) {
            std::size_t end = lower.find_first_of(",+", start);
            if (end == std::string::npos) {
                end = lower.size();
            }
            std::string_view part(lower.data() + start, end - start);
            if (part.empty()) {
                throw std::invalid_argument("bad index configuration '" + std::string(text) + "'");
            }
            out = out.with(parse_category(part));
            start = end + 1;
        }
        return out;
    }

    friend constexpr bool operator==(IndexConfig, IndexConfig) = default;

private:
    static constexpr std::uint8_t bit(Category c)
    {
        return static_cast<std::uint8_t>(1U << static_cast<unsigned>(c));
    }

    std::uint8_t mask_ = 0;
};

using DocNo = std::uint32_t;
using TermId = std::uint32_t;

struct Posting {
    DocNo doc;
    std::uint32_t tf;

    friend bool operator==(const Posting&, const Posting&) = default;
};

struct TermFreq {
    TermId term;
    std::uint32_t tf;

    friend bool operator==(const TermFreq&, const TermFreq&) = default;
};

struct TermStats {
    std::uint32_t df = 0;
    std::uint64_t cf = 0;

    friend bool operator==(const TermStats&, const TermStats&) = default;
};

/// In-memory inverted index with a forward (per-document) view.
///
/// Documents are numbered in ascending id order, so document numbers
/// order the same way as external ids and the index does not depend on
/// corpus order. Term ids follow lexicographic term order.
class InvertedIndex {
public:
    static constexpr int kSnapshotVersion = 1;

    /// Indexes title and abstract terms plus the terms of every keyphrase
    /// whose category is selected by `config`.
    static InvertedIndex build(const Corpus& corpus, IndexConfig config)
    {
        if (corpus.empty()) {
            throw std::invalid_argument("cannot index an empty corpus");
        }
        std::vector<const Document*> docs;
        docs.reserve(corpus.size());
        for (const auto& d : corpus) {
            docs.push_back(&d);
        }
        std::sort(docs.begin(), docs.end(),
                  [](const Document* a, const Document* b) { return a->id < b->id; });
        for (std::size_t i = 1; i < docs.size(); ++i) {
            if (docs[i]->id == docs[i - 1]->id) {
                throw std::invalid_argument("duplicate document id '" + docs[i]->id + "'");
            }
        }

        InvertedIndex idx;
        idx.config_ = config;
        std::map<std::string, std::vector<Posting>, std::less<>> vocab;
        std::uint64_t appended = 0;
        for (DocNo no = 0; no < docs.size(); ++no) {
            const Document& doc = *docs[no];
            std::map<std::string_view, std::uint32_t> tf;
            std::uint32_t len = 0;
            auto add = [&](const std::string& t) {
                ++tf[t];
                ++len;
            };
            for (const auto& t : doc.terms.terms()) {
                if (t != kSeparator) {
                    add(t);
                }
            }
            if (!config.empty()) {
                auto labels = classify_document(doc);
                for (std::size_t k = 0; k < labels.size(); ++k) {
                    if (labels[k].category && config.contains(*labels[k].category)) {
                        for (const auto& t : doc.keyphrase_terms[k]) {
                            add(t);
                        }
                        ++appended;
                    }
                }
            }
            for (const auto& [term, count] : tf) {
                auto it = vocab.find(term);
                if (it == vocab.end()) {
                    it = vocab.emplace(std::string(term), std::vector<Posting>{}).first;
                }
                it->second.push_back({no, count});
            }
            idx.doc_ids_.push_back(doc.id);
            idx.doc_len_.push_back(len);
        }
        idx.kp_appended_ = static_cast<double>(appended) / static_cast<double>(docs.size());
        idx.adopt(std::move(vocab));
        return idx;
    }

    [[nodiscard]] std::size_t num_docs() const { return doc_ids_.size(); }
    [[nodiscard]] std::size_t num_terms() const { return terms_.size(); }
    [[nodiscard]] double avg_doc_len() const { return avgdl_; }
    [[nodiscard]] std::uint64_t total_len() const { return total_len_; }
    [[nodiscard]] IndexConfig config() const { return config_; }
    /// Mean number of keyphrases appended per document.
    [[nodiscard]] double kp_appended() const { return kp_appended_; }

    [[nodiscard]] const std::string& doc_id(DocNo d) const { return doc_ids_.at(d); }
    [[nodiscard]] std::uint32_t doc_len(DocNo d) const { return doc_len_.at(d); }

    [[nodiscard]] std::optional<DocNo> find_doc(std::string_view id) const
    {
        auto it = std::lower_bound(doc_ids_.begin(), doc_ids_.end(), id);
        if (it == doc_ids_.end() || *it != id) {
            return std::nullopt;
        }
        return static_cast<DocNo>(it - doc_ids_.begin());
    }

    [[nodiscard]] std::optional<TermId> term_id(std::string_view term) const
    {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), term);
        if (it == terms_.end() || *it != term) {
            return std::nullopt;
        }
        return static_cast<TermId>(it - terms_.begin());
    }

    [[nodiscard]] const std::string& term(TermId t) const { return terms_.at(t); }

    /// Postings sorted by document number; empty for unknown terms.
    [[nodiscard]] std::span<const Posting> postings(std::string_view term) const
    {
        auto id = term_id(term);
        return id ? postings(*id) : std::span<const Posting>{};
    }

    [[nodiscard]] std::span<const Posting> postings(TermId t) const { return postings_.at(t); }

    [[nodiscard]] TermStats stats(std::string_view term) const
    {
        auto id = term_id(term);
        return id ? stats(*id) : TermStats{};
    }

    [[nodiscard]] TermStats stats(TermId t) const
    {
        return {static_cast<std::uint32_t>(postings_.at(t).size()), cf_.at(t)};
    }

    /// Terms of one document with their frequencies, by term id.
    [[nodiscard]] std::span<const TermFreq> doc_terms(DocNo d) const { return forward_.at(d); }

    /// Term set of a document by external id.
    [[nodiscard]] std::vector<std::string> vocabulary_of(std::string_view doc) const
    {
        std::vector<std::string> out;
        if (auto no = find_doc(doc)) {
            for (const auto& tf : doc_terms(*no)) {
                out.push_back(terms_[tf.term]);
            }
        }
        return out;
    }

    friend bool operator==(const InvertedIndex&, const InvertedIndex&) = default;

    void save(std::ostream& out) const
    {
        nlohmann::json j;
        j["format"] = "prmu-index";
        j["version"] = kSnapshotVersion;
        j["config"] = config_.codes();
        j["kp_appended"] = kp_appended_;
        auto& docs = j["documents"] = nlohmann::json::array();
        for (std::size_t d = 0; d < doc_ids_.size(); ++d) {
            docs.push_back({doc_ids_[d], doc_len_[d]});
        }
        auto& terms = j["postings"] = nlohmann::json::array();
        for (std::size_t t = 0; t < terms_.size(); ++t) {
            nlohmann::json plist = nlohmann::json::array();
            for (const auto& p : postings_[t]) {
                plist.push_back(p.doc);
                plist.push_back(p.tf);
            }
            terms.push_back({terms_[t], std::move(plist)});
        }
        out << j.dump() << '\n';
    }

    void save(const std::string& path) const
    {
        std::ofstream out(path);
        if (!out) {
            throw InputError("cannot write '" + path + "'");
        }
        save(out);
    }

    static InvertedIndex load(std::istream& in, const std::string& path = "<index>")
    {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw InputError(path + ": invalid index snapshot: " + e.what());
        }
        try {
            if (j.at("format") != "prmu-index") {
                throw InputError(path + ": not a prmu index snapshot");
            }
            if (j.at("version") != kSnapshotVersion) {
                throw InputError(path + ": unsupported snapshot version " +
                                 j.at("version").dump());
            }
            InvertedIndex idx;
            std::string codes = j.at("config").get<std::string>();
            idx.config_ = IndexConfig::parse(codes == "none" ? "" : join_codes(codes));
            idx.kp_appended_ = j.at("kp_appended").get<double>();
            for (const auto& d : j.at("documents")) {
                idx.doc_ids_.push_back(d.at(0).get<std::string>());
                idx.doc_len_.push_back(d.at(1).get<std::uint32_t>());
            }
            if (!std::is_sorted(idx.doc_ids_.begin(), idx.doc_ids_.end())) {
                throw InputError(path + ": documents out of order");
            }
            std::map<std::string, std::vector<Posting>, std::less<>> vocab;
            for (const auto& entry : j.at("postings")) {
                const auto& plist = entry.at(1);
                if (plist.size() % 2 != 0) {
                    throw InputError(path + ": odd-length posting list");
                }
                std::vector<Posting> postings;
                for (std::size_t i = 0; i + 1 < plist.size(); i += 2) {
                    Posting p{plist[i].get<DocNo>(), plist[i + 1].get<std::uint32_t>()};
                    if (p.doc >= idx.doc_ids_.size() || p.tf == 0) {
                        throw InputError(path + ": bad posting");
                    }
                    postings.push_back(p);
                }
                vocab.emplace(entry.at(0).get<std::string>(), std::move(postings));
            }
            idx.adopt(std::move(vocab));
            return idx;
        } catch (const nlohmann::json::exception& e) {
            throw InputError(path + ": malformed index snapshot: " + e.what());
        }
    }

    static InvertedIndex load(const std::string& path)
    {
        std::ifstream in(path);
        if (!in) {
            throw InputError("cannot open '" + path + "'");
        }
        return load(in, path);
    }

private:
    static std::string join_codes(const std::string& codes)
    {
        std::string out;
        for (char c : codes) {
            if (!out.empty()) {
                out += ',';
            }
            out += c;
        }
        return out;
    }

    void adopt(std::map<std::string, std::vector<Posting>, std::less<>>&& vocab)
    {
        terms_.clear();
        postings_.clear();
        cf_.clear();
        forward_.assign(doc_ids_.size(), {});
        for (auto& [term, plist] : vocab) {
            TermId id = static_cast<TermId>(terms_.size());
            std::uint64_t cf = 0;
            for (const auto& p : plist) {
                cf += p.tf;
                forward_[p.doc].push_back({id, p.tf});
            }
            terms_.push_back(term);
            cf_.push_back(cf);
            postings_.push_back(std::move(plist));
        }
        total_len_ = std::accumulate(doc_len_.begin(), doc_len_.end(), std::uint64_t{0});
        avgdl_ = doc_ids_.empty()
                     ? 0.0
                     : static_cast<double>(total_len_) / static_cast<double>(doc_ids_.size());
    }

    std::vector<std::string> doc_ids_;
    std::vector<std::uint32_t> doc_len_;
    std::vector<std::string> terms_;
    std::vector<std::vector<Posting>> postings_;
    std::vector<std::uint64_t> cf_;
    std::vector<std::vector<TermFreq>> forward_;
    std::uint64_t total_len_ = 0;
    double avgdl_ = 0.0;
    double kp_appended_ = 0.0;
    IndexConfig config_;
};

}  // namespace prmu
