#include <gtest/gtest.h>

#include <prmu/prmu.hpp>

using prmu::Category;
using prmu::FAveraging;

namespace {
prmu::Corpus docs()
{
    return {prmu::Document::make("d1", "neural keyphrase generation",
                                 "we generate keyphrases with sequence models",
                                 {"keyphrase generation", "sequence models", "deep learning",
                                  "neural networks", "text mining"}),
            prmu::Document::make("d2", "retrieval", "document expansion helps retrieval",
                                 {"document expansion", "information retrieval"}),
            prmu::Document::make("d3", "no gold", "nothing assigned", {})};
}

class QuietWarnings : public ::testing::Test {
protected:
    void SetUp() override
    {
        old_ = prmu::set_warning_handler([this](const std::string& m) { warnings.push_back(m); });
    }
    void TearDown() override { prmu::set_warning_handler(old_); }
    std::vector<std::string> warnings;

private:
    prmu::WarningHandler old_;
};
}  // namespace

using Generation = QuietWarnings;

TEST_F(Generation, PerfectPredictions)
{
    auto c = docs();
    auto r = prmu::grade_generation({{"d1", c[0].keyphrases}}, c, 5);
    EXPECT_DOUBLE_EQ(r.f_at_k, 1.0);
    EXPECT_DOUBLE_EQ(r.precision, 1.0);
    EXPECT_DOUBLE_EQ(r.recall, 1.0);
    EXPECT_EQ(r.n_docs, 1u);
}

TEST_F(Generation, DisjointPredictions)
{
    auto c = docs();
    auto r = prmu::grade_generation({{"d1", {"alpha", "beta"}}, {"d2", {"gamma"}}}, c, 5);
    EXPECT_DOUBLE_EQ(r.f_at_k, 0.0);
    EXPECT_DOUBLE_EQ(r.percent(Category::Unseen), 100.0);
}

TEST_F(Generation, PartialOverlapHandComputed)
{
    auto c = docs();
    // d1: 5 distinct predictions ("Keyphrase Generations" duplicates the first
    // after stemming), 2 correct out of 5 gold: P=2/5, R=2/5, F=0.4.
    // d2: 2 predictions, 1 correct out of 2 gold: P=1/2, R=1/2, F=0.5.
    std::vector<prmu::Prediction> preds{
        {"d1",
         {"keyphrase generation", "Keyphrase Generations", "neural models", "sequence models",
          "generation", "keyphrases", "text mining"}},
        {"d2", {"document expansions", "retrieval"}}};
    auto r = prmu::grade_generation(preds, c, 5);
    EXPECT_NEAR(r.f_at_k, (0.4 + 0.5) / 2, 1e-12);
    EXPECT_NEAR(r.precision, (0.4 + 0.5) / 2, 1e-12);
    EXPECT_NEAR(r.recall, (0.4 + 0.5) / 2, 1e-12);
    EXPECT_EQ(r.n_predictions, 7u);
    EXPECT_EQ(r.n_short_lists, 1u);
    // "neural models" is the one Reordered prediction: "neural" sits in the
    // title and "model" in the abstract. Everything else is Present.
    EXPECT_NEAR(r.percent(Category::Present), 100.0 * 6 / 7, 1e-12);
    EXPECT_NEAR(r.percent(Category::Reordered), 100.0 * 1 / 7, 1e-12);

    auto micro = prmu::grade_generation(preds, c, 5, FAveraging::Micro);
    EXPECT_NEAR(micro.precision, 3.0 / 7, 1e-12);
    EXPECT_NEAR(micro.recall, 3.0 / 7, 1e-12);
    EXPECT_NEAR(micro.f_at_k, 3.0 / 7, 1e-12);
}

TEST_F(Generation, DocumentsWithoutGoldExcluded)
{
    auto c = docs();
    auto r = prmu::grade_generation({{"d1", c[0].keyphrases}, {"d3", {"nothing"}}}, c, 5);
    EXPECT_EQ(r.n_skipped_no_gold, 1u);
    EXPECT_EQ(r.n_docs, 1u);
    EXPECT_DOUBLE_EQ(r.f_at_k, 1.0);
    EXPECT_EQ(r.n_predictions, 6u);
    EXPECT_FALSE(warnings.empty());
}

TEST_F(Generation, Errors)
{
    auto c = docs();
    try {
        prmu::grade_generation({{"x1", {}}, {"d1", {}}, {"x2", {}}}, c, 5);
        FAIL() << "expected InputError";
    } catch (const prmu::InputError& e) {
        std::string msg = e.what();
        EXPECT_NE(msg.find("x1"), std::string::npos);
        EXPECT_NE(msg.find("x2"), std::string::npos);
    }
    EXPECT_THROW(prmu::grade_generation({}, c, 0), std::invalid_argument);
}

TEST_F(Generation, EmptyPredictionList)
{
    auto c = docs();
    auto r = prmu::grade_generation({{"d2", {}}}, c, 5);
    EXPECT_DOUBLE_EQ(r.f_at_k, 0.0);
    EXPECT_EQ(r.n_predictions, 0u);
}
