#pragma once

#include <array>
#include <string>
#include <string_view>

namespace prmu {

/// Classic Porter stemmer operating on lowercase ASCII words.
///
/// Follows the reference implementation distributed by Martin Porter, which
/// departs from the 1980 description in two step-2 rules ("bli" -> "ble" and
/// "logi" -> "log"). This is the variant used by Lucene's PorterStemmer.
/// Words of length 1 or 2 are returned unchanged.
class PorterStemmer {
public:
    [[nodiscard]] std::string stem(std::string_view word) const
    {
        Buffer buf{std::string(word)};
        if (buf.w.size() <= 2) {
            return buf.w;
        }
        step1ab(buf);
        step1c(buf);
        step2(buf);
        step3(buf);
        step4(buf);
        step5(buf);
        return buf.w;
    }

private:
    struct Rule {
        std::string_view suffix;
        std::string_view replacement;
    };

    struct Buffer {
        std::string w;

        [[nodiscard]] bool consonant(std::size_t i) const
        {
            switch (w[i]) {
            case 'a':
            case 'e':
            case 'i':
            case 'o':
            case 'u':
                return false;
            case 'y':
                return i == 0 ? true : !consonant(i - 1);
            default:
                return true;
            }
        }

        // Number of VC sequences in w[0, len).
        [[nodiscard]] int measure(std::size_t len) const
        {
            int n = 0;
            std::size_t i = 0;
            while (i < len && consonant(i)) {
                ++i;
            }
            while (i < len) {
                while (i < len && !consonant(i)) {
                    ++i;
                }
                if (i >= len) {
                    break;
                }
                while (i < len && consonant(i)) {
                    ++i;
                }
                ++n;
            }
            return n;
        }

        [[nodiscard]] bool vowel_in(std::size_t len) const
        {
            for (std::size_t i = 0; i < len; ++i) {
                if (!consonant(i)) {
                    return true;
                }
            }
            return false;
        }

        [[nodiscard]] bool double_consonant(std::size_t len) const
        {
            return len >= 2 && w[len - 1] == w[len - 2] && consonant(len - 1);
        }

        // consonant-vowel-consonant ending at len-1, last not w, x or y.
        [[nodiscard]] bool cvc(std::size_t len) const
        {
            if (len < 3 || !consonant(len - 1) || consonant(len - 2) || !consonant(len - 3)) {
                return false;
            }
            char c = w[len - 1];
            return c != 'w' && c != 'x' && c != 'y';
        }

        [[nodiscard]] bool ends(std::string_view s) const
        {
            return w.size() >= s.size() && std::string_view(w).substr(w.size() - s.size()) == s;
        }

        [[nodiscard]] std::size_t stem_len(std::string_view suffix) const
        {
            return w.size() - suffix.size();
        }

        void replace(std::string_view suffix, std::string_view repl)
        {
            w.resize(stem_len(suffix));
            w.append(repl);
        }
    };

    static void step1ab(Buffer& b)
    {
        if (b.w.back() == 's') {
            if (b.ends("sses")) {
                b.replace("sses", "ss");
            } else if (b.ends("ies")) {
                b.replace("ies", "i");
            } else if (b.w.size() >= 2 && b.w[b.w.size() - 2] != 's') {
                b.w.pop_back();
            }
        }
        if (b.ends("eed")) {
            if (b.measure(b.stem_len("eed")) > 0) {
                b.w.pop_back();
            }
            return;
        }
        std::string_view suffix;
        if (b.ends("ed")) {
            suffix = "ed";
        } else if (b.ends("ing")) {
            suffix = "ing";
        } else {
            return;
        }
        if (!b.vowel_in(b.stem_len(suffix))) {
            return;
        }
        b.w.resize(b.stem_len(suffix));
        if (b.ends("at")) {
            b.w += 'e';
        } else if (b.ends("bl")) {
            b.w += 'e';
        } else if (b.ends("iz")) {
            b.w += 'e';
        } else if (b.double_consonant(b.w.size())) {
            char c = b.w.back();
            if (c != 'l' && c != 's' && c != 'z') {
                b.w.pop_back();
            }
        } else if (b.measure(b.w.size()) == 1 && b.cvc(b.w.size())) {
            b.w += 'e';
        }
    }

    static void step1c(Buffer& b)
    {
        if (b.ends("y") && b.vowel_in(b.w.size() - 1)) {
            b.w.back() = 'i';
        }
    }

    // The first matching suffix decides; it is replaced only when the
    // remaining stem has measure greater than min_measure.
    template <std::size_t N>
    static bool apply_rules(Buffer& b, const std::array<Rule, N>& rules, int min_measure)
    {
        for (const auto& rule : rules) {
            if (b.ends(rule.suffix)) {
                if (b.measure(b.stem_len(rule.suffix)) > min_measure) {
                    b.replace(rule.suffix, rule.replacement);
                }
                return true;
            }
        }
        return false;
    }

    static void step2(Buffer& b)
    {
        static constexpr std::array<Rule, 21> rules{{
            {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},   {"anci", "ance"},
            {"izer", "ize"},    {"bli", "ble"},     {"alli", "al"},     {"entli", "ent"},
            {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
            {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
            {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"},
            {"logi", "log"},
        }};
        apply_rules(b, rules, 0);
    }

    static void step3(Buffer& b)
    {
        static constexpr std::array<Rule, 7> rules{{
            {"icate", "ic"},
            {"ative", ""},
            {"alize", "al"},
            {"iciti", "ic"},
            {"ical", "ic"},
            {"ful", ""},
            {"ness", ""},
        }};
        apply_rules(b, rules, 0);
    }

    static void step4(Buffer& b)
    {
        static constexpr std::array<Rule, 18> rules{{
            {"al", ""},   {"ance", ""}, {"ence", ""}, {"er", ""},  {"ic", ""},  {"able", ""},
            {"ible", ""}, {"ant", ""},  {"ement", ""}, {"ment", ""}, {"ent", ""}, {"ou", ""},
            {"ism", ""},  {"ate", ""},  {"iti", ""},  {"ous", ""}, {"ive", ""}, {"ize", ""},
        }};
        if (b.ends("ion")) {
            std::size_t len = b.stem_len("ion");
            if (len > 0 && (b.w[len - 1] == 's' || b.w[len - 1] == 't')) {
                if (b.measure(len) > 1) {
                    b.w.resize(len);
                }
                return;
            }
        }
        apply_rules(b, rules, 1);
    }

    static void step5(Buffer& b)
    {
        if (b.w.back() == 'e') {
            std::size_t len = b.w.size() - 1;
            int m = b.measure(len);
            if (m > 1 || (m == 1 && !b.cvc(len))) {
                b.w.pop_back();
            }
        }
        if (b.w.back() == 'l' && b.double_consonant(b.w.size()) && b.measure(b.w.size()) > 1) {
            b.w.pop_back();
        }
    }
};

}  // namespace prmu
