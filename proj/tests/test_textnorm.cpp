#include <fstream>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include <prmu/textnorm.hpp>

using prmu::TermSeq;

TEST(Porter, Vocabulary)
{
    std::ifstream in(PRMU_TEST_DATA "/porter_vocabulary.tsv");
    ASSERT_TRUE(in) << "missing porter_vocabulary.tsv";
    prmu::PorterStemmer stemmer;
    std::string line;
    std::size_t n = 0;
    std::size_t bad = 0;
    while (std::getline(in, line)) {
        auto tab = line.find('\t');
        ASSERT_NE(tab, std::string::npos) << line;
        std::string word = line.substr(0, tab);
        std::string want = line.substr(tab + 1);
        std::string got = stemmer.stem(word);
        if (got != want && ++bad <= 20) {
            ADD_FAILURE() << word << ": got " << got << ", want " << want;
        }
        ++n;
    }
    EXPECT_GT(n, 5000u);
    EXPECT_EQ(bad, 0u);
}

TEST(Porter, Examples)
{
    EXPECT_EQ(prmu::stem("systems"), "system");
    EXPECT_EQ(prmu::stem("x"), "x");
    EXPECT_EQ(prmu::stem("sharing"), "share");
    EXPECT_EQ(prmu::stem("information"), "inform");
    EXPECT_EQ(prmu::stem("retrieval"), "retriev");
    EXPECT_EQ(prmu::stem("behavior"), "behavior");
    EXPECT_EQ(prmu::stem("support"), "support");
}

TEST(Porter, NonAlphaTokensPassThrough)
{
    EXPECT_EQ(prmu::stem("2020s"), "2020s");
    EXPECT_EQ(prmu::stem("caf\xc3\xa9s"), "caf\xc3\xa9s");
}

TEST(Tokenize, Basics)
{
    EXPECT_TRUE(prmu::tokenize("").empty());
    EXPECT_EQ(prmu::tokenize("Metasearch System"), (TermSeq{"metasearch", "system"}));
    EXPECT_EQ(prmu::tokenize("  --a,,B..c  "), (TermSeq{"a", "b", "c"}));
    EXPECT_EQ(prmu::tokenize("e-mail 3D"), (TermSeq{"e", "mail", "3d"}));
}

TEST(Tokenize, PossessiveDropped)
{
    EXPECT_EQ(prmu::tokenize("User's Behavior"), (TermSeq{"user", "behavior"}));
    EXPECT_EQ(prmu::tokenize("user\xe2\x80\x99s"), (TermSeq{"user"}));
    EXPECT_EQ(prmu::tokenize("users' preference"), (TermSeq{"users", "preference"}));
    EXPECT_EQ(prmu::tokenize("it's"), (TermSeq{"it"}));
    // Not a possessive: the apostrophe is an ordinary separator.
    EXPECT_EQ(prmu::tokenize("o'sullivan"), (TermSeq{"o", "sullivan"}));
    EXPECT_EQ(prmu::tokenize("don't"), (TermSeq{"don", "t"}));
    EXPECT_EQ(prmu::tokenize("'s"), (TermSeq{"s"}));
}

TEST(Tokenize, Unicode)
{
    EXPECT_EQ(prmu::tokenize("\xc3\x89T\xc3\x89 caf\xc3\xa9"), (TermSeq{"\xc3\xa9t\xc3\xa9", "caf\xc3\xa9"}));
    // En dash and no-break space separate words.
    EXPECT_EQ(prmu::tokenize("a\xe2\x80\x93" "b\xc2\xa0" "c"), (TermSeq{"a", "b", "c"}));
    // Invalid UTF-8 acts as a separator.
    EXPECT_EQ(prmu::tokenize("ab\xff" "cd"), (TermSeq{"ab", "cd"}));
}

TEST(Normalize, Examples)
{
    EXPECT_EQ(prmu::normalize("Search Systems"), (TermSeq{"search", "system"}));
    EXPECT_TRUE(prmu::normalize("").empty());
    EXPECT_EQ(prmu::normalize("Information Retrieval"), (TermSeq{"inform", "retriev"}));
}

TEST(DocTermSeq, Construction)
{
    auto s = prmu::doc_term_sequence("A B", "C");
    EXPECT_EQ(s.terms(), (TermSeq{"a", "b", prmu::kSeparator, "c"}));
    EXPECT_EQ(s.separator_position(), 2u);
    EXPECT_EQ(s.content_terms(), (TermSeq{"a", "b", "c"}));
    EXPECT_EQ(prmu::doc_term_sequence("", "C").terms(), (TermSeq{prmu::kSeparator, "c"}));
    EXPECT_EQ(prmu::DocTermSeq().terms(), (TermSeq{prmu::kSeparator}));
}

namespace {
std::string random_text(std::mt19937& rng)
{
    static const std::string pieces[] = {"a",  "B",  " ",   "'",  "'s", "-",     "9",  "\xc3\xa9",
                                         "\xe2\x80\x99", ".", "\t", "\xff", "ing", "ies", "\x1f", "S"};
    std::uniform_int_distribution<std::size_t> pick(0, std::size(pieces) - 1);
    std::uniform_int_distribution<int> len(0, 12);
    std::string out;
    for (int i = 0, n = len(rng); i < n; ++i) {
        out += pieces[pick(rng)];
    }
    return out;
}
}  // namespace

TEST(Tokenize, Properties)
{
    std::mt19937 rng(7);
    for (int i = 0; i < 5000; ++i) {
        std::string x = random_text(rng);
        std::string y = random_text(rng);
        for (const auto& tok : prmu::tokenize(x)) {
            EXPECT_FALSE(tok.empty());
            EXPECT_NE(tok, prmu::kSeparator);
            for (std::size_t p = 0; p < tok.size();) {
                auto c = prmu::detail::decode_utf8(tok, p);
                EXPECT_TRUE(prmu::detail::is_word_char(c.cp)) << x;
                p += c.len;
            }
        }
        TermSeq joined = prmu::normalize(x);
        TermSeq tail = prmu::normalize(y);
        joined.insert(joined.end(), tail.begin(), tail.end());
        EXPECT_EQ(prmu::normalize(x + " " + y), joined) << '[' << x << "] [" << y << ']';
        EXPECT_EQ(prmu::normalize(x), prmu::normalize(x));
    }
}
