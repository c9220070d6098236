#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <stdexcept>

#include "laughtrack/error.hpp"
#include "laughtrack/fuzzy.hpp"
#include "laughtrack/pairwise.hpp"
#include "oracles/oracles.hpp"

using namespace laughtrack;

namespace {

QuoteSet qs(std::vector<std::string> q) { return QuoteSet{"t", QuoteSource::model, std::move(q), {}, {}}; }

double exact(const std::string& a, const std::string& b) { return a == b ? 1.0 : 0.0; }

SimilarityMatrix from_grid(const oracle::Grid& g, std::size_t k) {
  SimilarityMatrix s(g.size(), k);
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < k; ++j) s(i, j) = g[i][j];
  }
  return s;
}

oracle::Grid random_grid(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  oracle::Grid g(n, std::vector<double>(k));
  for (auto& row : g) {
    for (auto& v : row) v = u(rng);
  }
  return g;
}

}  // namespace

TEST(BuildMatrix, ExactIndicatorGivesIdentity) {
  const auto s = build_similarity_matrix(qs({"a", "b"}), qs({"a", "b"}), exact);
  ASSERT_EQ(s.rows(), 2u);
  ASSERT_EQ(s.cols(), 2u);
  EXPECT_EQ(s(0, 0), 1.0);
  EXPECT_EQ(s(1, 1), 1.0);
  EXPECT_EQ(s(0, 1), 0.0);
  EXPECT_EQ(s(1, 0), 0.0);
}

TEST(BuildMatrix, EmptyModelSide) {
  const auto s = build_similarity_matrix(qs({}), qs({"a"}), exact);
  EXPECT_EQ(s.rows(), 0u);
  EXPECT_EQ(s.cols(), 1u);
  const auto z = build_similarity_matrix(qs({"a", "b"}), qs({}), exact);
  EXPECT_EQ(z.rows(), 2u);
  EXPECT_EQ(z.cols(), 0u);
}

TEST(BuildMatrix, LevenshteinOnSingleCharacters) {
  const auto s = build_similarity_matrix(qs({"x", "y"}), qs({"x"}), fuzzy_similarity_fn());
  EXPECT_EQ(s(0, 0), 1.0);
  EXPECT_EQ(s(1, 0), 0.0);
}

TEST(BuildMatrix, OutOfRangeSimilarityNamesThePair) {
  auto bad = [](const std::string& a, const std::string&) { return a == "boom" ? 1.5 : 0.5; };
  for (int serial = 0; serial < 2; ++serial) {
    try {
      const std::vector<std::string> m = {"ok", "boom"}, g = {"g0", "g1"};
      if (serial) {
        build_similarity_matrix_serial(m, g, bad);
      } else {
        build_similarity_matrix(m, g, bad);
      }
      FAIL();
    } catch (const ContractError& e) {
      const std::string msg = e.what();
      EXPECT_NE(msg.find("\"boom\""), std::string::npos) << msg;
      EXPECT_NE(msg.find("model 1"), std::string::npos) << msg;
    }
  }
  auto nan_sim = [](std::size_t, std::size_t) { return std::nan(""); };
  EXPECT_THROW(build_similarity_matrix(3, 3, nan_sim), ContractError);
}

TEST(BuildMatrix, ParallelPropagatesExceptions) {
  auto throws = [](std::size_t i, std::size_t j) -> double {
    if (i == 7 && j == 3) throw std::runtime_error("sim failed");
    return 0.5;
  };
  EXPECT_THROW(build_similarity_matrix(40, 40, throws), std::runtime_error);
}

TEST(BuildMatrix, ParallelMatchesSerial) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = rng() % 60, k = 1 + rng() % 60;
    const auto g = random_grid(rng, n, k);
    auto sim = [&](std::size_t i, std::size_t j) { return g[i][j]; };
    EXPECT_EQ(build_similarity_matrix(n, k, sim), build_similarity_matrix_serial(n, k, sim));
  }
}

TEST(BestMatches, Examples) {
  EXPECT_EQ(best_matches(from_grid({{0.2, 0.9}, {0.7, 0.1}}, 2)), (std::vector<double>{0.7, 0.9}));
  EXPECT_EQ(best_matches(SimilarityMatrix(0, 3)), (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(best_matches(from_grid({{1, 0}, {0, 1}}, 2)), (std::vector<double>{1, 1}));
}

TEST(BestMatches, OptionalThreshold) {
  const auto s = from_grid({{0.2, 0.9}, {0.7, 0.1}}, 2);
  EXPECT_EQ(best_matches(s, 0.8), (std::vector<double>{0.0, 0.9}));
  EXPECT_EQ(best_matches(s, 0.7), (std::vector<double>{0.7, 0.9}));
}

TEST(Penalty, Examples) {
  EXPECT_EQ(overgeneration_penalty(5, 3), 2u);
  EXPECT_EQ(overgeneration_penalty(3, 5), 0u);
  EXPECT_EQ(overgeneration_penalty(0, 0), 0u);
}

TEST(FinalScore, Examples) {
  EXPECT_EQ(final_score(std::vector<double>{1, 1, 1}, 0, 0.1), 1.0);
  EXPECT_EQ(final_score(std::vector<double>{1.0}, 2, 0.1), 0.8);
  EXPECT_EQ(final_score(std::vector<double>{0.1}, 5, 0.1), 0.0);
}

TEST(FinalScore, EmptyGroundTruthIsUndefined) {
  EXPECT_THROW(final_score(std::vector<double>{}, 0, 0.1), UndefinedScoreError);
  EXPECT_THROW(score_quote_sets(qs({"a"}), qs({}), exact), UndefinedScoreError);
  EXPECT_THROW(final_score(std::vector<double>{1.0}, 0, -0.5), ContractError);
}

TEST(ScoreQuoteSets, Examples) {
  const auto g = qs({"I hate mornings", "My dog judges me", "Taxes"});
  EXPECT_EQ(score_quote_sets(g, g, fuzzy_similarity_fn()).final_score, 1.0);

  const auto r = score_quote_sets(qs({"g1", "g1", "g1"}), qs({"g1"}), exact);
  EXPECT_EQ(r.best_per_ground_truth, (std::vector<double>{1.0}));
  EXPECT_EQ(r.penalty_count, 2u);
  EXPECT_EQ(r.alpha, 0.1);
  EXPECT_EQ(r.final_score, 0.8);
}

TEST(ScoreQuoteSets, MatchesBruteForceOracle) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> alpha(0.0, 0.3);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = rng() % 5, k = 1 + rng() % 4;
    const auto g = random_grid(rng, n, k);
    const double a = alpha(rng);
    const auto r = score_matrix(from_grid(g, k), {a, std::nullopt});
    EXPECT_NEAR(r.final_score, oracle::brute_force_score(g, n, k, a), 1e-12);
    const auto rt = score_matrix(from_grid(g, k), {a, 0.5});
    EXPECT_NEAR(rt.final_score, oracle::brute_force_score(g, n, k, a, 0.5), 1e-12);
  }
}

// Properties over random matrices.

TEST(ScoreProperties, RaisingAnEntryNeverLowersTheScore) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 5, k = 1 + rng() % 5;
    auto g = random_grid(rng, n, k);
    const double before = score_matrix(from_grid(g, k)).final_score;
    auto& cell = g[rng() % n][rng() % k];
    cell += (1.0 - cell) * u(rng);
    EXPECT_GE(score_matrix(from_grid(g, k)).final_score, before);
  }
}

TEST(ScoreProperties, DuplicatePredictionCostsAlpha) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 1 + rng() % 4, n = k + rng() % 3;
    auto g = random_grid(rng, n, k);
    const double before = score_matrix(from_grid(g, k)).final_score;
    g.push_back(g[rng() % n]);
    const double after = score_matrix(from_grid(g, k)).final_score;
    EXPECT_NEAR(after, std::max(before - 0.1, 0.0), 1e-12);
  }
}

TEST(ScoreProperties, PermutationInvariant) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = rng() % 6, k = 1 + rng() % 6;
    auto g = random_grid(rng, n, k);
    const double before = score_matrix(from_grid(g, k)).final_score;
    std::shuffle(g.begin(), g.end(), rng);
    std::vector<std::size_t> cols(k);
    for (std::size_t j = 0; j < k; ++j) cols[j] = j;
    std::shuffle(cols.begin(), cols.end(), rng);
    auto permuted = g;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < k; ++j) permuted[i][j] = g[i][cols[j]];
    }
    EXPECT_NEAR(score_matrix(from_grid(permuted, k)).final_score, before, 1e-12);
  }
}

TEST(ScoreProperties, RangeAndPlainMeanWhenNoOvergeneration) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = rng() % 8, k = 1 + rng() % 6;
    const auto g = random_grid(rng, n, k);
    const auto r = score_matrix(from_grid(g, k));
    EXPECT_GE(r.final_score, 0.0);
    EXPECT_LE(r.final_score, 1.0);
    EXPECT_EQ(r.penalty_count, n > k ? n - k : 0);
    for (double t : r.best_per_ground_truth) {
      EXPECT_GE(t, 0.0);
      EXPECT_LE(t, 1.0);
    }
    if (n <= k) {
      double mean = 0.0;
      for (double t : r.best_per_ground_truth) mean += t;
      EXPECT_NEAR(r.final_score, mean / static_cast<double>(k), 1e-12);
    }
  }
}
