#include <gtest/gtest.h>

#include <fstream>

#include "corpus_fixture.hpp"
#include "fewscast/common/csv.hpp"
#include "fewscast/common/error.hpp"
#include "fewscast/common/hash.hpp"
#include "fewscast/common/month.hpp"
#include "fewscast/corpus/corpus_index.hpp"
#include "fewscast/corpus/news_factor.hpp"
#include "oracles.hpp"

using namespace fewscast;
using namespace fewscast::corpus;
using testutil::article;

namespace {

const DateWindow kWindow{{2011, 1, 1}, {2011, 12, 31}};

void write_lines(const std::filesystem::path& p, const std::vector<std::string>& lines) {
    std::ofstream out(p);
    for (const auto& l : lines) out << l << '\n';
}

std::string jsonl(const std::string& id, const std::string& date, const std::string& text,
                  const std::string& country = "SO") {
    return R"({"id":")" + id + R"(","date":")" + date + R"(","source":"wire","countries":[")" +
           country + R"("],"text":")" + text + R"("})";
}

}  // namespace

TEST(Month, ArithmeticAndFormatting) {
    const Month m(2015, 11);
    EXPECT_EQ((m + 3).str(), "2016-02");
    EXPECT_EQ(Month(2016, 2) - m, 3);
    EXPECT_EQ(Month::parse("2014-07-19"), Month(2014, 7));
    EXPECT_THROW(Month::parse("2014-13"), DataError);
    EXPECT_THROW(Date::parse("2015-02-29"), DataError);
    EXPECT_NO_THROW(Date::parse("2016-02-29"));
}

TEST(Text, TokenizeAndSubsequence) {
    const auto t = text::tokenize("Floods, pests & Jamaame!");
    EXPECT_EQ(t, (std::vector<std::string>{"floods", "pests", "jamaame"}));
    const std::vector<std::string> hay{"a", "b", "a", "b", "a"}, needle{"a", "b", "a"};
    EXPECT_EQ(text::count_subsequence(hay, needle), 2u);
    EXPECT_EQ(text::find_subsequence(hay, std::vector<std::string>{"b", "a"}), 1u);
    EXPECT_EQ(text::join(text::split("crop  failure")), "crop failure");
}

TEST(Csv, QuotingRoundTrip) {
    EXPECT_EQ(csv::split_record(R"(a,"b,c","d ""e""",)"),
              (std::vector<std::string>{"a", "b,c", R"(d "e")", ""}));
    EXPECT_EQ(csv::escape("x,y"), R"("x,y")");
    EXPECT_EQ(csv::format_double(0.1), "0.1");
    EXPECT_EQ(std::stod(csv::format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Hash, StableAndSensitive) {
    EXPECT_EQ(ContentHash().update("abc").hex(), ContentHash().update("a").update("bc").hex());
    EXPECT_NE(ContentHash().update("abc").hex(), ContentHash().update("abd").hex());
}

TEST(Gazetteer, MatchesNamesAndAliases) {
    const auto g = testutil::small_gazetteer();
    const auto a = article("1", {2011, 3, 2}, {"SO"}, "Floods hit the district of Jamaame");
    const auto locs = match_locations(a, g);
    EXPECT_TRUE(locs.count({Level::District, "SO01"}));
    EXPECT_TRUE(locs.count({Level::Province, "SO-JH"}));
    EXPECT_TRUE(locs.count({Level::Country, "SO"}));
    EXPECT_EQ(locs.size(), 3u);

    const auto b = article("2", {2011, 3, 2}, {"ET"}, "Drought reported in Majang zone");
    EXPECT_TRUE(match_locations(b, g).count({Level::District, "ET01"}));
}

TEST(Gazetteer, NoNamesGivesCountryTagsOnly) {
    const auto g = testutil::small_gazetteer();
    const auto a = article("1", {2011, 3, 2}, {"ET", "SO"}, "Prices rose across the region");
    const auto locs = match_locations(a, g);
    EXPECT_EQ(locs, (std::set<LocationKey>{{Level::Country, "ET"}, {Level::Country, "SO"}}));
}

TEST(Gazetteer, RejectsInvalidRecords) {
    District bad{"X1", "Nowhere", {}, "P", "XX", 95.0, 0.0, {}};
    EXPECT_THROW(Gazetteer({bad}), DataError);
    District a{"X1", "A", {}, "P", "XA", 0, 0, {}}, b{"X2", "B", {}, "P", "XB", 0, 0, {}};
    EXPECT_THROW(Gazetteer({a, b}), DataError);
}

TEST(Gazetteer, LoadsCsv) {
    testutil::TempDir dir("gaz");
    write_lines(dir.path() / "g.csv",
                {"district_id,name,aliases,province_id,country,lat,lon,population,area_km2,ruggedness,"
                 "cropland_share,pasture_share",
                 "SO01,Jamaame,jamame|jamama,SO-JH,SO,0.0,42.7,100000,3000,1,0.2,0.3"});
    const auto g = Gazetteer::load(dir.path() / "g.csv");
    ASSERT_EQ(g.size(), 1u);
    EXPECT_EQ(g.districts()[0].aliases.size(), 2u);
    EXPECT_EQ(g.country_of({Level::Province, "SO-JH"}), "SO");
}

TEST(Ingest, ThreeArticlesInWindow) {
    testutil::TempDir dir("ingest");
    write_lines(dir.path() / "c.jsonl", {jsonl("a", "2011-01-05", "drought in Jamaame"),
                                         jsonl("b", "2011-01-20", "floods"),
                                         jsonl("c", "2011-03-01", "conflict")});
    IngestReport rep;
    const auto idx = ingest_corpus(dir.path() / "c.jsonl", kWindow, testutil::small_gazetteer(), {}, &rep);
    EXPECT_EQ(idx.size(), 3u);
    EXPECT_EQ(idx.month_bucket(Month(2011, 1)).size(), 2u);
    EXPECT_EQ(idx.month_bucket(Month(2011, 2)).size(), 0u);
    EXPECT_EQ(idx.month_bucket(Month(2011, 3)).size(), 1u);
    EXPECT_EQ(rep.accepted, 3u);
}

TEST(Ingest, OutsideWindowExcluded) {
    testutil::TempDir dir("ingest");
    write_lines(dir.path() / "c.jsonl", {jsonl("a", "2011-01-05", "drought"), jsonl("b", "2012-01-20", "floods")});
    IngestReport rep;
    const auto idx = ingest_corpus(dir.path() / "c.jsonl", kWindow, testutil::small_gazetteer(), {}, &rep);
    EXPECT_EQ(idx.size(), 1u);
    EXPECT_EQ(rep.outside_window, 1u);
    EXPECT_EQ(idx.monthly_total("SO", Month(2011, 1)), 1u);
}

TEST(Ingest, DuplicateIdFatalWhenStrict) {
    testutil::TempDir dir("ingest");
    write_lines(dir.path() / "c.jsonl", {jsonl("a", "2011-01-05", "drought"), jsonl("a", "2011-02-05", "floods")});
    EXPECT_THROW(ingest_corpus(dir.path() / "c.jsonl", kWindow, testutil::small_gazetteer(), {true}), DataError);
    IngestReport rep;
    const auto idx = ingest_corpus(dir.path() / "c.jsonl", kWindow, testutil::small_gazetteer(), {false}, &rep);
    EXPECT_EQ(idx.size(), 1u);
    EXPECT_EQ(rep.problems.size(), 1u);
}

TEST(Ingest, MalformedLineReportedWithNumber) {
    testutil::TempDir dir("ingest");
    write_lines(dir.path() / "c.jsonl", {jsonl("a", "2011-01-05", "drought"), "{not json"});
    IngestReport rep;
    ingest_corpus(dir.path() / "c.jsonl", kWindow, testutil::small_gazetteer(), {}, &rep);
    ASSERT_EQ(rep.problems.size(), 1u);
    EXPECT_NE(rep.problems[0].find(":2: "), std::string::npos);
    EXPECT_THROW(ingest_corpus(dir.path() / "c.jsonl", kWindow, testutil::small_gazetteer(), {true}), DataError);
}

TEST(CorpusIndex, NgramPostingsRequireContiguity) {
    std::vector<Article> arts{article("1", {2011, 1, 3}, {"SO"}, "crop failure in the south"),
                              article("2", {2011, 1, 4}, {"SO"}, "failure of the crop"),
                              article("3", {2011, 2, 4}, {"SO"}, "crop failure again crop failure")};
    CorpusIndex idx(arts, testutil::small_gazetteer(), kWindow);
    const std::vector<std::string> ng{"crop", "failure"};
    EXPECT_EQ(idx.ngram_postings(ng), (std::vector<ArticleId>{0, 2}));
    EXPECT_EQ(idx.ngram_counts(2).at("crop failure"), 3u);
}

class FactorFixture : public ::testing::Test {
protected:
    void SetUp() override {
        // January 2011: 10 Somali articles; 4 mention floods together with Jamaame,
        // 2 of those 4 and one other article mention famine.
        std::vector<std::string> texts{
            "floods in Jamaame", "floods in Jamaame", "floods near Jamaame and famine",
            "Jamaame floods famine fears", "famine warning", "markets", "rain", "roads",
            "floods elsewhere", "Jamaame school"};
        for (std::size_t i = 0; i < texts.size(); ++i)
            arts.push_back(article("a" + std::to_string(i), {2011, 1, 10}, {"SO"}, texts[i]));
        arts.push_back(article("e1", {2011, 1, 10}, {"ET"}, "floods in Jamaame"));
        arts.push_back(article("f1", {2011, 2, 10}, {"SO"}, "markets"));
    }
    std::vector<Article> arts;
};

TEST_F(FactorFixture, DirectRatio) {
    CorpusIndex idx(arts, testutil::small_gazetteer(), kWindow);
    const auto f = compute_news_factor("floods", {Level::District, "SO01"}, idx);
    EXPECT_DOUBLE_EQ(f.values[0], 0.4);
    EXPECT_DOUBLE_EQ(f.values[1], 0.0);
    EXPECT_EQ(f.values.size(), 12u);
    EXPECT_TRUE(f.zero_denominator[2]);
}

TEST_F(FactorFixture, NeverCoMentionedIsZero) {
    CorpusIndex idx(arts, testutil::small_gazetteer(), kWindow);
    const auto f = compute_news_factor("markets", {Level::District, "SO01"}, idx);
    for (double v : f.values) EXPECT_EQ(v, 0.0);
}

TEST_F(FactorFixture, ExcludingTargetArticles) {
    CorpusIndex idx(arts, testutil::small_gazetteer(), kWindow);
    const auto mask = mark_articles(idx, [](const Article& a) {
        return std::find(a.tokens.begin(), a.tokens.end(), "famine") != a.tokens.end();
    });
    FactorOptions opt;
    opt.excluded = &mask;
    const auto f = compute_news_factor("floods", {Level::District, "SO01"}, idx, opt);
    EXPECT_DOUBLE_EQ(f.values[0], 2.0 / 7.0);
}

TEST_F(FactorFixture, CorpusDenominator) {
    CorpusIndex idx(arts, testutil::small_gazetteer(), kWindow);
    FactorOptions opt;
    opt.denominator = Denominator::Corpus;
    const auto f = compute_news_factor("floods", {Level::District, "SO01"}, idx, opt);
    // the Ethiopian article also names Jamaame, so it joins the numerator
    EXPECT_DOUBLE_EQ(f.values[0], 5.0 / 11.0);
}

TEST_F(FactorFixture, UnknownTokenThrowsAndBatchZeroes) {
    CorpusIndex idx(arts, testutil::small_gazetteer(), kWindow);
    EXPECT_THROW(compute_news_factor("locusts", {Level::District, "SO01"}, idx), DataError);
    const auto batch = compute_news_factors({"locusts"}, {{Level::Country, "SO"}}, idx);
    ASSERT_EQ(batch.size(), 1u);
    for (double v : batch[0].values) EXPECT_EQ(v, 0.0);
}

TEST_F(FactorFixture, ValuesAreShares) {
    CorpusIndex idx(arts, testutil::small_gazetteer(), kWindow);
    const auto fs = compute_news_factors({"floods", "famine", "markets"},
                                         {{Level::District, "SO01"}, {Level::Province, "SO-JH"}, {Level::Country, "SO"}},
                                         idx);
    EXPECT_EQ(fs.size(), 9u);
    for (const auto& f : fs)
        for (double v : f.values) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
}

TEST_F(FactorFixture, CsvRoundTrip) {
    CorpusIndex idx(arts, testutil::small_gazetteer(), kWindow);
    const auto fs = compute_news_factors({"floods", "crop failure"}, {{Level::Province, "SO-JH"}}, idx);
    testutil::TempDir dir("factors");
    write_factors_csv(dir.path() / "f.csv", fs);
    const auto back = read_factors_csv(dir.path() / "f.csv");
    ASSERT_EQ(back.size(), fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i) {
        EXPECT_EQ(back[i].feature, fs[i].feature);
        EXPECT_EQ(back[i].location, fs[i].location);
        EXPECT_EQ(back[i].first, fs[i].first);
        EXPECT_EQ(back[i].values, fs[i].values);
    }
}
