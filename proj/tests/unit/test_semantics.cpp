#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "corpus_fixture.hpp"
#include "fewscast/common/error.hpp"
#include "fewscast/common/text.hpp"
#include "fewscast/corpus/corpus_index.hpp"
#include "fewscast/semantics/clustering.hpp"
#include "fewscast/semantics/embedding.hpp"
#include "fewscast/semantics/expansion.hpp"
#include "fewscast/semantics/wmd.hpp"
#include "fewscast/tsstats/correlation.hpp"
#include "oracles.hpp"

using namespace fewscast;
using namespace fewscast::semantics;

namespace {

EmbeddingTable random_table(const std::vector<std::string>& words, std::size_t dim, unsigned seed,
                            double scale = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, scale);
    EmbeddingTable t(dim);
    for (const auto& w : words) {
        std::vector<double> v(dim);
        for (auto& x : v) x = z(rng);
        t.insert(w, v);
    }
    return t;
}

void write_text(const std::filesystem::path& p, const std::string& s) { std::ofstream(p) << s; }

}  // namespace

TEST(Embeddings, LoadsTextFormat) {
    testutil::TempDir dir("emb");
    write_text(dir.path() / "e.txt", "3 2\nfloods 1 0\ndrought 0 1\nfamine 0.5 0.5\n");
    const auto t = load_embeddings(dir.path() / "e.txt");
    EXPECT_EQ(t.size(), 3u);
    EXPECT_EQ(t.dim(), 2u);
    EXPECT_DOUBLE_EQ((*t.find("famine"))[1], 0.5);
}

TEST(Embeddings, ShortLineIsError) {
    testutil::TempDir dir("emb");
    write_text(dir.path() / "e.txt", "2 3\nfloods 1 0 0\ndrought 0 1\n");
    EXPECT_THROW(load_embeddings(dir.path() / "e.txt"), DataError);
}

TEST(Embeddings, DuplicateLastWinsWithWarning) {
    testutil::TempDir dir("emb");
    write_text(dir.path() / "e.txt", "2 2\nfloods 1 0\nfloods 3 4\n");
    std::vector<std::string> w;
    const auto t = load_embeddings(dir.path() / "e.txt", &w);
    EXPECT_EQ(t.size(), 1u);
    EXPECT_DOUBLE_EQ((*t.find("floods"))[0], 3.0);
    ASSERT_FALSE(w.empty());
    EXPECT_NE(w[0].find("duplicate"), std::string::npos);
}

TEST(Wmd, IdentityIsZero) {
    const auto t = random_table({"a", "b", "c"}, 8, 1);
    for (const char* p : {"a", "a b", "c b a", "a a b"}) EXPECT_NEAR(wmd(p, p, t), 0.0, 1e-12);
}

TEST(Wmd, SingleWordsAreEuclidean) {
    const auto t = random_table({"x", "y"}, 8, 2);
    EXPECT_NEAR(wmd("x", "y", t), oracle::euclid(*t.find("x"), *t.find("y")), 1e-12);
}

TEST(Wmd, TwoByTwoMatchesGridOverPolytope) {
    const auto t = random_table({"a", "b", "c", "d"}, 8, 3);
    std::vector<double> cost{oracle::euclid(*t.find("a"), *t.find("c")), oracle::euclid(*t.find("a"), *t.find("d")),
                             oracle::euclid(*t.find("b"), *t.find("c")), oracle::euclid(*t.find("b"), *t.find("d"))};
    EXPECT_NEAR(wmd("a b", "c d", t), oracle::transport_2x2_grid(0.5, 0.5, cost), 1e-9);
}

TEST(Wmd, MatchesExhaustiveIntegerPlans) {
    const std::vector<std::string> vocab{"w0", "w1", "w2", "w3", "w4", "w5"};
    const auto t = random_table(vocab, 8, 4);
    std::mt19937 rng(9);
    std::uniform_int_distribution<int> len(1, 3), pick(0, 5);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<std::string> a, b;
        for (int i = len(rng); i > 0; --i) a.push_back(vocab[pick(rng)]);
        for (int i = len(rng); i > 0; --i) b.push_back(vocab[pick(rng)]);
        EXPECT_NEAR(wmd(text::join(a), text::join(b), t), oracle::wmd(a, b, t), 1e-9);
    }
}

TEST(Wmd, PlanIsFeasible) {
    const auto t = random_table({"a", "b", "c", "d", "e"}, 8, 5);
    const std::vector<std::string> a{"a", "b", "c"}, b{"d", "e"};
    const auto plan = wmd_plan(a, b, t);
    for (std::size_t i = 0; i < plan.rows; ++i) {
        double s = 0;
        for (std::size_t j = 0; j < plan.cols; ++j) {
            EXPECT_GE(plan.at(i, j), -1e-12);
            s += plan.at(i, j);
        }
        EXPECT_NEAR(s, 1.0 / 3.0, 1e-12);
    }
}

TEST(Wmd, MetricAxiomsOnRandomTriples) {
    const std::vector<std::string> vocab{"a", "b", "c", "d", "e", "f", "g"};
    const auto t = random_table(vocab, 8, 6);
    std::mt19937 rng(10);
    std::uniform_int_distribution<int> len(1, 3), pick(0, 6);
    auto phrase = [&] {
        std::vector<std::string> p;
        for (int i = len(rng); i > 0; --i) p.push_back(vocab[pick(rng)]);
        return text::join(p);
    };
    for (int rep = 0; rep < 200; ++rep) {
        const auto x = phrase(), y = phrase(), z = phrase();
        const double xy = wmd(x, y, t), yx = wmd(y, x, t), yz = wmd(y, z, t), xz = wmd(x, z, t);
        EXPECT_NEAR(xy, yx, 1e-9);
        EXPECT_LE(xz, xy + yz + 1e-9);
        EXPECT_GE(xy, 0.0);
    }
}

TEST(Wmd, OutOfVocabulary) {
    const auto t = random_table({"a", "b"}, 4, 7);
    EXPECT_THROW(wmd("a zz", "b", t), DataError);
    EXPECT_NEAR(wmd("a zz", "b", t, OovPolicy::Skip), wmd("a", "b", t), 1e-12);
    EXPECT_THROW(wmd("zz", "b", t, OovPolicy::Skip), DataError);
    EXPECT_FALSE(embeddable("a zz", t));
    EXPECT_TRUE(embeddable("a b", t));
}

TEST(Candidates, BigramCountThresholdIsStrict) {
    std::vector<corpus::Article> arts;
    for (int i = 0; i < 1000; ++i)
        arts.push_back(testutil::article("a" + std::to_string(i), {2011, 1 + i % 12, 1}, {"SO"}, "food aid"));
    arts.push_back(testutil::article("b0", {2011, 5, 1}, {"SO"}, "crop failure crop failure"));
    for (int i = 1; i < 1000; ++i)
        arts.push_back(testutil::article("b" + std::to_string(i), {2011, 1 + i % 12, 2}, {"SO"}, "crop failure"));
    arts.push_back(testutil::article("u", {2011, 6, 1}, {"SO"}, "locusts"));
    corpus::CorpusIndex idx(arts, testutil::small_gazetteer(), {{2011, 1, 1}, {2011, 12, 31}});
    const auto c = enumerate_candidates(idx, 1000);
    auto has = [&](const std::string& s) { return std::binary_search(c.begin(), c.end(), s); };
    EXPECT_FALSE(has("food aid"));
    EXPECT_TRUE(has("crop failure"));
    EXPECT_TRUE(has("locusts"));
    EXPECT_TRUE(has("food"));
    EXPECT_FALSE(has("failure crop"));
    EXPECT_TRUE(std::is_sorted(c.begin(), c.end()));
}

TEST(Expansion, TerroristJoinsTerrorism) {
    EmbeddingTable t(2);
    t.insert("terrorism", std::vector<double>{0, 0});
    t.insert("terrorist", std::vector<double>{3, 0});
    t.insert("football", std::vector<double>{30, 0});
    const auto r = expand_seeds({"terrorism"}, {"football", "terrorism", "terrorist"}, t, 6.0);
    ASSERT_EQ(r.features.size(), 1u);
    EXPECT_EQ(r.features[0].ngram, "terrorist");
    EXPECT_EQ(r.features[0].nearest_seed, "terrorism");
    EXPECT_DOUBLE_EQ(r.features[0].distance, 3.0);
}

TEST(Expansion, RadiusIsStrict) {
    EmbeddingTable t(2);
    t.insert("seed", std::vector<double>{0, 0});
    t.insert("edge", std::vector<double>{6, 0});
    t.insert("inside", std::vector<double>{0, 5.999});
    const auto r = expand_seeds({"seed"}, {"edge", "inside"}, t, 6.0);
    ASSERT_EQ(r.features.size(), 1u);
    EXPECT_EQ(r.features[0].ngram, "inside");
}

TEST(Expansion, NearestSeedTiesGoToEarlierSeed) {
    EmbeddingTable t(1);
    t.insert("s1", std::vector<double>{-1});
    t.insert("s2", std::vector<double>{1});
    t.insert("mid", std::vector<double>{0});
    t.insert("oov", std::vector<double>{0});
    const auto r = expand_seeds({"s1", "s2"}, {"mid", "unknown"}, t, 6.0, OovPolicy::Skip);
    ASSERT_EQ(r.features.size(), 1u);
    EXPECT_EQ(r.features[0].nearest_seed, "s1");
    EXPECT_EQ(r.skipped_candidates, 1u);
}

TEST(Clustering, KEqualsNGivesSingletons) {
    const std::vector<std::string> f{"a", "b", "c", "d"};
    const auto t = random_table(f, 4, 11);
    const auto cl = cluster_features(f, t, 4);
    ASSERT_EQ(cl.size(), 4u);
    for (const auto& c : cl) EXPECT_EQ(c.members.size(), 1u);
}

TEST(Clustering, KOneGivesOneCluster) {
    const std::vector<std::string> f{"a", "b", "c", "d"};
    const auto t = random_table(f, 4, 12);
    const auto cl = cluster_features(f, t, 1);
    ASSERT_EQ(cl.size(), 1u);
    EXPECT_EQ(cl[0].members, f);
    EXPECT_EQ(cl[0].cluster_id, 1);
}

TEST(Clustering, RecoversPlantedGroups) {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> z(0.0, 0.3);
    EmbeddingTable t(4);
    std::vector<std::string> f;
    for (int i = 0; i < 10; ++i) {
        const std::string w = "w" + std::to_string(i);
        const double centre = i % 2 ? 20.0 : -20.0;
        t.insert(w, std::vector<double>{centre + z(rng), z(rng), z(rng), z(rng)});
        f.push_back(w);
    }
    const auto cl = cluster_features(f, t, 2, {"even", "odd"});
    ASSERT_EQ(cl.size(), 2u);
    EXPECT_EQ(cl[0].label, "even");
    EXPECT_EQ(cl[0].members, (std::vector<std::string>{"w0", "w2", "w4", "w6", "w8"}));
    EXPECT_EQ(cl[1].members, (std::vector<std::string>{"w1", "w3", "w5", "w7", "w9"}));
}

TEST(Clustering, PairwiseMatrixSymmetric) {
    const std::vector<std::string> f{"a", "b c", "c"};
    const auto t = random_table({"a", "b", "c"}, 4, 14);
    const auto d = pairwise_wmd(f, t);
    ASSERT_EQ(d.size(), 9u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(d[i * 3 + i], 0.0);
        for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(d[i * 3 + j], d[j * 3 + i]);
    }
}

TEST(ClusterValidation, IdenticalSeries) {
    const std::vector<double> s{1, 3, 2, 5, 4};
    const std::map<std::string, std::vector<double>> series{{"a", s}, {"b", s}, {"c", s}};
    const std::vector<FeatureCluster> cl{{1, "x", {"a", "b"}}, {2, "y", {"c"}}};
    const auto r = cluster_validation(cl, series);
    EXPECT_NEAR(r.intra, 1.0, 1e-12);
    EXPECT_NEAR(r.inter, 1.0, 1e-12);
}

TEST(ClusterValidation, OrthogonalClusters) {
    const std::vector<double> u{1, -1, 1, -1}, v{1, 1, -1, -1};
    const std::map<std::string, std::vector<double>> series{{"a", u}, {"b", u}, {"c", v}, {"d", v}};
    const std::vector<FeatureCluster> cl{{1, "x", {"a", "b"}}, {2, "y", {"c", "d"}}};
    const auto r = cluster_validation(cl, series);
    EXPECT_NEAR(r.intra, 1.0, 1e-12);
    EXPECT_NEAR(r.inter, 0.0, 1e-12);
}

TEST(ClusterValidation, MatchesBruteForceAverages) {
    std::mt19937_64 rng(15);
    std::normal_distribution<double> z;
    std::vector<double> b1(60), b2(60);
    for (auto& x : b1) x = z(rng);
    for (auto& x : b2) x = z(rng);
    std::map<std::string, std::vector<double>> series;
    const std::vector<FeatureCluster> cl{{1, "x", {"a", "b", "c"}}, {2, "y", {"d", "e"}}};
    for (const auto& c : cl)
        for (const auto& m : c.members) {
            std::vector<double> s(60);
            for (std::size_t i = 0; i < 60; ++i) s[i] = (c.cluster_id == 1 ? b1[i] : b2[i]) + 0.5 * z(rng);
            series[m] = s;
        }
    series["flat"] = std::vector<double>(60, 0.0);
    auto cl2 = cl;
    cl2[1].members.push_back("flat");
    double intra = 0, inter = 0;
    int ni = 0, ne = 0;
    const std::vector<std::pair<std::string, int>> all{{"a", 1}, {"b", 1}, {"c", 1}, {"d", 2}, {"e", 2}};
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            const double r = tsstats::pearson(series[all[i].first], series[all[j].first]);
            if (all[i].second == all[j].second) {
                intra += r;
                ++ni;
            } else {
                inter += r;
                ++ne;
            }
        }
    const auto r = cluster_validation(cl2, series);
    EXPECT_NEAR(r.intra, intra / ni, 1e-12);
    EXPECT_NEAR(r.inter, inter / ne, 1e-12);
    EXPECT_EQ(r.intra_pairs, 4u);
    EXPECT_EQ(r.inter_pairs, 6u);
    EXPECT_EQ(r.excluded, std::vector<std::string>{"flat"});
}

TEST(Clustering, JsonAndEdgesRoundTrip) {
    testutil::TempDir dir("clusters");
    const std::vector<FeatureCluster> cl{{1, "conflict", {"conflict", "fighting"}}, {2, "drought", {"drought"}}};
    write_clusters_json(dir.path() / "c.json", cl);
    const auto back = read_clusters_json(dir.path() / "c.json");
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0].members, cl[0].members);
    EXPECT_EQ(back[1].label, "drought");

    const std::vector<std::string> f{"a", "b", "c"};
    const std::vector<double> d{0, 1, 7, 1, 0, 2, 7, 2, 0};
    write_similarity_edges_csv(dir.path() / "e.csv", f, d, 6.0);
    std::ifstream in(dir.path() / "e.csv");
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 3);
}
