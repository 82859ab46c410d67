#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "porter.hpp"

namespace prmu {

/// Ordered sequence of normalized (lowercased, stemmed) terms.
using TermSeq = std::vector<std::string>;

/// Marker placed between title and abstract terms. Control characters are
/// token separators, so the tokenizer can never emit this string.
inline const std::string kSeparator = "\x1f";

namespace detail {

/// Decodes one UTF-8 code point starting at `pos`. Invalid or truncated
/// sequences yield U+FFFD and consume a single byte.
struct Utf8Char {
    char32_t cp;
    std::size_t len;
};

inline Utf8Char decode_utf8(std::string_view s, std::size_t pos)
{
    constexpr char32_t kInvalid = 0xFFFD;
    auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
    unsigned char lead = byte(pos);
    if (lead < 0x80) {
        return {lead, 1};
    }
    std::size_t len = 0;
    char32_t cp = 0;
    if ((lead & 0xE0) == 0xC0) {
        len = 2;
        cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
        len = 3;
        cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
        len = 4;
        cp = lead & 0x07;
    } else {
        return {kInvalid, 1};
    }
    if (pos + len > s.size()) {
        return {kInvalid, 1};
    }
    for (std::size_t i = 1; i < len; ++i) {
        unsigned char c = byte(pos + i);
        if ((c & 0xC0) != 0x80) {
            return {kInvalid, 1};
        }
        cp = (cp << 6) | (c & 0x3F);
    }
    static constexpr char32_t kMinForLen[] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMinForLen[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        return {kInvalid, 1};
    }
    return {cp, len};
}

/// Letters and digits. Outside ASCII every code point counts as a letter
/// except the Latin-1 symbol block, general and CJK punctuation, spaces,
/// and the replacement character.
inline bool is_word_char(char32_t cp)
{
    if (cp < 0x80) {
        return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
    }
    if (cp < 0xC0) {
        return cp == 0xAA || cp == 0xB5 || cp == 0xBA;
    }
    if (cp == 0xD7 || cp == 0xF7) {
        return false;
    }
    if ((cp >= 0x2000 && cp <= 0x2BFF) || (cp >= 0x3000 && cp <= 0x303F)) {
        return false;
    }
    if (cp >= 0xFE30 && cp <= 0xFE6F) {
        return false;
    }
    if ((cp >= 0xFF00 && cp <= 0xFF0F) || cp == 0xFEFF || cp == 0xFFFD) {
        return false;
    }
    return true;
}

inline char32_t to_lower(char32_t cp)
{
    if (cp >= 'A' && cp <= 'Z') {
        return cp + 32;
    }
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) {
        return cp + 32;
    }
    return cp;
}

inline void append_utf8(std::string& out, char32_t cp)
{
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

inline bool is_ascii_alpha(std::string_view token)
{
    for (char c : token) {
        if (c < 'a' || c > 'z') {
            return false;
        }
    }
    return true;
}

inline bool is_apostrophe(char32_t cp)
{
    return cp == U'\'' || cp == 0x2019;
}

// True when the text at `pos`, just past an apostrophe, is a possessive
// "s" that closes the word ("user's", "system's,").
inline bool possessive_follows(std::string_view text, std::size_t pos)
{
    if (pos >= text.size() || (text[pos] != 's' && text[pos] != 'S')) {
        return false;
    }
    if (pos + 1 < text.size() && is_word_char(decode_utf8(text, pos + 1).cp)) {
        return false;
    }
    return true;
}
}  // namespace detail

/// Splits UTF-8 text on maximal runs of non-alphanumeric characters and
/// lowercases each fragment. An English possessive "'s" is dropped rather
/// than producing a separate "s" token.
inline std::vector<std::string> tokenize(std::string_view text)
{
    std::vector<std::string> tokens;
    std::string current;
    for (std::size_t pos = 0; pos < text.size();) {
        auto [cp, len] = detail::decode_utf8(text, pos);
        pos += len;
        if (detail::is_apostrophe(cp) && !current.empty() &&
            detail::possessive_follows(text, pos)) {
            ++pos;
            tokens.push_back(std::move(current));
            current.clear();
            continue;
        }
        if (detail::is_word_char(cp)) {
            detail::append_utf8(current, detail::to_lower(cp));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        tokens.push_back(std::move(current));
    }
    return tokens;
}

/// Porter stem of a lowercase token. Tokens that are not purely ASCII
/// letters (digits, accented letters) pass through unchanged.
inline std::string stem(std::string_view token)
{
    static const PorterStemmer stemmer;
    if (!detail::is_ascii_alpha(token)) {
        return std::string(token);
    }
    return stemmer.stem(token);
}

inline TermSeq normalize(std::string_view text)
{
    TermSeq terms = tokenize(text);
    for (auto& t : terms) {
        t = stem(t);
    }
    return terms;
}

/// Title terms, the separator, then abstract terms.
class DocTermSeq {
public:
    DocTermSeq() : terms_{kSeparator} {}

    DocTermSeq(std::string_view title, std::string_view abstract)
    {
        terms_ = normalize(title);
        separator_pos_ = terms_.size();
        terms_.push_back(kSeparator);
        TermSeq body = normalize(abstract);
        terms_.insert(terms_.end(), std::make_move_iterator(body.begin()),
                      std::make_move_iterator(body.end()));
    }

    /// All terms including the separator.
    [[nodiscard]] const std::vector<std::string>& terms() const { return terms_; }
    [[nodiscard]] std::size_t separator_position() const { return separator_pos_; }

    /// Terms without the separator, in source order.
    [[nodiscard]] TermSeq content_terms() const
    {
        TermSeq out;
        out.reserve(terms_.size() - 1);
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            if (i != separator_pos_) {
                out.push_back(terms_[i]);
            }
        }
        return out;
    }

    friend bool operator==(const DocTermSeq&, const DocTermSeq&) = default;

private:
    std::vector<std::string> terms_;
    std::size_t separator_pos_ = 0;
};

inline DocTermSeq doc_term_sequence(std::string_view title, std::string_view abstract)
{
    return DocTermSeq(title, abstract);
}

}  // namespace prmu
