#include <gtest/gtest.h>

#include <random>

#include "laughtrack/fuzzy.hpp"
#include "laughtrack/text.hpp"
#include "oracles/oracles.hpp"

using namespace laughtrack;

TEST(Levenshtein, Examples) {
  EXPECT_EQ(levenshtein_distance(std::string_view("kitten"), std::string_view("sitting")), 3u);
  EXPECT_EQ(oracle::levenshtein_table(U"kitten", U"sitting"), 3u);
  EXPECT_EQ(levenshtein_distance(std::string_view("abc"), std::string_view("abc")), 0u);
  EXPECT_EQ(levenshtein_distance(std::string_view(""), std::string_view("abc")), 3u);
  EXPECT_EQ(levenshtein_distance(std::string_view("abc"), std::string_view("")), 3u);
}

TEST(Levenshtein, MultibyteCharactersAreOneEdit) {
  EXPECT_EQ(levenshtein_distance(std::string_view("café"), std::string_view("cafe")), 1u);
  EXPECT_EQ(levenshtein_distance(std::string_view("😀"), std::string_view("😁")), 1u);
  EXPECT_EQ(levenshtein_distance(std::string_view("中文"), std::string_view("")), 2u);
}

TEST(Levenshtein, MatchesFullTableOracle) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = oracle::random_u32(rng, 64);
    const auto b = oracle::random_u32(rng, 64);
    ASSERT_EQ(levenshtein_distance(a, b), oracle::levenshtein_table(a, b));
    ASSERT_EQ(levenshtein_distance(encode_utf8(a), encode_utf8(b)), oracle::levenshtein_table(a, b));
  }
}

TEST(Levenshtein, TriangleInequality) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = oracle::random_u32(rng, 24), b = oracle::random_u32(rng, 24), c = oracle::random_u32(rng, 24);
    EXPECT_LE(levenshtein_distance(a, c), levenshtein_distance(a, b) + levenshtein_distance(b, c));
  }
}

TEST(FuzzySimilarity, Examples) {
  EXPECT_DOUBLE_EQ(fuzzy_similarity("kitten", "sitting"), 1.0 - 3.0 / 7.0);
  EXPECT_EQ(fuzzy_similarity("same words", "same words"), 1.0);
  EXPECT_EQ(fuzzy_similarity("", "abc"), 0.0);
  EXPECT_EQ(fuzzy_similarity("", ""), 1.0);
  EXPECT_EQ(fuzzy_similarity("   ", "\t"), 1.0);
}

TEST(FuzzySimilarity, NormalizationFlag) {
  EXPECT_EQ(fuzzy_similarity("Hello  World", "hello world"), 1.0);
  FuzzyConfig raw{false, 0.1};
  EXPECT_LT(fuzzy_similarity("Hello  World", "hello world", raw), 1.0);
  EXPECT_DOUBLE_EQ(fuzzy_similarity("Hello", "hello", raw), 0.8);
}

TEST(FuzzySimilarity, SymmetricAndZeroIffFullDistance) {
  std::mt19937_64 rng(47);
  FuzzyConfig raw{false, 0.1};
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = oracle::random_u32(rng, 16), b = oracle::random_u32(rng, 16);
    const auto sa = encode_utf8(a), sb = encode_utf8(b);
    const double s = fuzzy_similarity(sa, sb, raw);
    EXPECT_EQ(s, fuzzy_similarity(sb, sa, raw));
    EXPECT_EQ(fuzzy_similarity(sa, sa, raw), 1.0);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    const bool full = oracle::levenshtein_table(a, b) == std::max(a.size(), b.size());
    EXPECT_EQ(s == 0.0, full && !(a.empty() && b.empty()));
    EXPECT_DOUBLE_EQ(s, oracle::normalized_similarity(a, b));
  }
}

TEST(FuzzyMatrix, ParallelEqualsSerial) {
  std::mt19937_64 rng(53);
  QuoteSet m{"t", QuoteSource::model, {}, {}, {}}, g{"t", QuoteSource::ground_truth, {}, {}, {}};
  for (int i = 0; i < 40; ++i) m.quotes.push_back(encode_utf8(oracle::random_u32(rng, 30)) + "x");
  for (int i = 0; i < 25; ++i) g.quotes.push_back(encode_utf8(oracle::random_u32(rng, 30)) + "y");
  EXPECT_EQ(fuzzy_similarity_matrix(m, g), fuzzy_similarity_matrix_serial(m, g));
}

TEST(ScoreFuzzy, BruteForceOverRandomQuotes) {
  std::mt19937_64 rng(59);
  FuzzyConfig raw{false, 0.1};
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = rng() % 5, k = 1 + rng() % 4;
    std::vector<std::u32string> m(n), g(k);
    QuoteSet qm{"t", QuoteSource::model, {}, {}, {}}, qg{"t", QuoteSource::ground_truth, {}, {}, {}};
    for (auto& s : m) qm.quotes.push_back(encode_utf8(s = oracle::random_u32(rng, 12)));
    for (auto& s : g) qg.quotes.push_back(encode_utf8(s = oracle::random_u32(rng, 12)));
    oracle::Grid grid(n, std::vector<double>(k));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < k; ++j) grid[i][j] = oracle::normalized_similarity(m[i], g[j]);
    }
    EXPECT_NEAR(score_fuzzy(qm, qg, raw).final_score, oracle::brute_force_score(grid, n, k, 0.1), 1e-12);
  }
}
