#pragma once

#include <string>
#include <vector>

#include "textnorm.hpp"

namespace prmu {

/// A titled abstract with its assigned keyphrases, kept both as raw text and
/// in normalized form.
struct Document {
    std::string id;
    std::string title;
    std::string abstract;
    std::vector<std::string> keyphrases;

    DocTermSeq terms;
    std::vector<TermSeq> keyphrase_terms;  // parallel to keyphrases

    static Document make(std::string id, std::string title, std::string abstract,
                         std::vector<std::string> keyphrases)
    {
        Document doc{std::move(id), std::move(title), std::move(abstract), std::move(keyphrases),
                     {}, {}};
        doc.terms = doc_term_sequence(doc.title, doc.abstract);
        doc.keyphrase_terms.reserve(doc.keyphrases.size());
        for (const auto& kp : doc.keyphrases) {
            doc.keyphrase_terms.push_back(normalize(kp));
        }
        return doc;
    }
};

using Corpus = std::vector<Document>;

}  // namespace prmu
