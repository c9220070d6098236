#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "laughtrack/error.hpp"
#include "laughtrack/subspace.hpp"
#include "oracles/oracles.hpp"

using namespace laughtrack;

namespace {

Eigen::MatrixXd to_eigen(const oracle::Grid& g) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(g[0].size()));
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g[0].size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g[i][j];
  }
  return m;
}

oracle::Grid to_grid(const Eigen::MatrixXd& m) {
  oracle::Grid g(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  }
  return g;
}

oracle::Grid gaussian(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> n;
  oracle::Grid g(rows, std::vector<double>(cols));
  for (auto& r : g) {
    for (auto& v : r) v = n(rng);
  }
  return g;
}

SubspaceBasis basis_of(const Eigen::MatrixXd& x, std::size_t q) { return pca_basis(VectorSet(x), q); }

Eigen::VectorXd unit(Eigen::Index d, Eigen::Index i) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
  v(i) = 1.0;
  return v;
}

QuoteSet qs(std::vector<std::string> q, std::string variation = {}) {
  QuoteSet s{"t", QuoteSource::model, std::move(q), {}, {}};
  if (!variation.empty()) s.variation_id = variation;
  return s;
}

}  // namespace

TEST(PcaBasis, RankDeficiencyCollapsesQ) {
  Eigen::MatrixXd x(3, 2);
  x << 1, 1, 0, 0, 0, 0;
  const auto b = basis_of(x, 2);
  EXPECT_EQ(b.dimension(), 1u);
  EXPECT_EQ(b.rank, 1u);
  EXPECT_NEAR(b.basis(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(b.energy[0], 1.0, 1e-15);
}

TEST(PcaBasis, SpansThePlane) {
  Eigen::MatrixXd x(3, 2);
  x << 1, 0, 0, 1, 0, 0;
  const auto b = basis_of(x, 2);
  ASSERT_EQ(b.dimension(), 2u);
  // projector onto the basis equals diag(1,1,0)
  const Eigen::MatrixXd p = b.basis * b.basis.transpose();
  Eigen::MatrixXd want = Eigen::MatrixXd::Zero(3, 3);
  want(0, 0) = want(1, 1) = 1.0;
  EXPECT_LT((p - want).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PcaBasis, MatchesDenseSvdOracleUpToSign) {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = gaussian(rng, 8, 5);
    const auto b = basis_of(to_eigen(x), 3);
    ASSERT_EQ(b.dimension(), 3u);
    auto [sigma, u] = oracle::left_singular_vectors(x);
    double total = 0;
    for (double s : sigma) total += s * s;
    for (std::size_t c = 0; c < 3; ++c) {
      double same = 0, flipped = 0;
      for (std::size_t r = 0; r < 8; ++r) {
        same = std::max(same, std::abs(b.basis(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) - u[r][c]));
        flipped =
            std::max(flipped, std::abs(b.basis(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) + u[r][c]));
      }
      EXPECT_LT(std::min(same, flipped), 1e-8);
      EXPECT_NEAR(b.energy[c], sigma[c] * sigma[c] / total, 1e-10);
    }
    // orthonormal columns
    EXPECT_LT((b.basis.transpose() * b.basis - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(PcaBasis, SignConventionIsStable) {
  std::mt19937_64 rng(79);
  const auto x = to_eigen(gaussian(rng, 6, 4));
  const auto a = basis_of(x, 3), b = basis_of(-x, 3);
  EXPECT_LT((a.basis - b.basis).cwiseAbs().maxCoeff(), 1e-10);
  for (Eigen::Index c = 0; c < 3; ++c) {
    Eigen::Index peak;
    a.basis.col(c).cwiseAbs().maxCoeff(&peak);
    EXPECT_GT(a.basis(peak, c), 0.0);
  }
}

TEST(PcaBasis, Errors) {
  EXPECT_THROW(basis_of(Eigen::MatrixXd::Zero(4, 2), 1), DegenerateInputError);
  EXPECT_THROW(basis_of(Eigen::MatrixXd::Identity(4, 2), 0), ContractError);
  EXPECT_THROW(VectorSet(Eigen::MatrixXd(3, 0)), ContractError);
}

TEST(PcaBasis, CenteredFlag) {
  // two points symmetric about a mean offset: centered PCA sees one direction
  Eigen::MatrixXd x(2, 2);
  x << 5, 5, 1, -1;
  EXPECT_EQ(numerical_rank(VectorSet(x)), 2u);
  EXPECT_EQ(numerical_rank(VectorSet(x), {true, 1e-10}), 1u);
  const auto b = pca_basis(VectorSet(x), 2, {true, 1e-10});
  EXPECT_EQ(b.dimension(), 1u);
  EXPECT_NEAR(std::abs(b.basis(1, 0)), 1.0, 1e-12);
}

TEST(CanonicalAngles, Examples) {
  const auto e1 = basis_of(unit(3, 0), 1);
  const auto e2 = basis_of(unit(3, 1), 1);
  Eigen::VectorXd diag = unit(3, 0) + unit(3, 1);
  const auto a = canonical_angles(e1, e1);
  EXPECT_NEAR(a.cosines.at(0), 1.0, 1e-15);
  EXPECT_EQ(canonical_angles(e1, e2).cosines.at(0), 0.0);
  EXPECT_NEAR(canonical_angles(e1, basis_of(diag, 1)).cosines.at(0), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(canonical_angles(e1, basis_of(diag, 1)).angles().at(0), std::acos(1.0 / std::sqrt(2.0)), 1e-12);
  EXPECT_THROW(canonical_angles(e1, basis_of(unit(4, 0), 1)), ContractError);
}

TEST(SubspaceScore, Examples) {
  CanonicalAngles one{{1.0, 1.0}, {1.0, 1.0}};
  EXPECT_EQ(subspace_score(one, 1), 1.0);
  EXPECT_EQ(subspace_score(one, 2), 1.0);
  CanonicalAngles zero{{0.0}, {0.0}};
  EXPECT_EQ(subspace_score(zero, 1), 0.0);
  CanonicalAngles half{{1.0, 0.0}, {1.0, 0.0}};
  EXPECT_EQ(subspace_score(half, 2), 0.5);
  EXPECT_THROW(subspace_score(half, 0), ContractError);
  EXPECT_THROW(subspace_score(half, 3), ContractError);
}

TEST(SubspaceScore, MatchesGramEigenvalueOracle) {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 2 + rng() % 63, n = 1 + rng() % 10, k = 1 + rng() % 10;
    const auto m = gaussian(rng, d, n), g = gaussian(rng, d, k);
    const auto res = score_subspaces(VectorSet(to_eigen(m)), VectorSet(to_eigen(g)));
    const std::size_t q = std::min({std::size_t{5}, std::min(d, n), std::min(d, k)});
    const auto a = oracle::top_left_basis(m, q), b = oracle::top_left_basis(g, q);
    ASSERT_EQ(res.q_model, a[0].size());
    ASSERT_EQ(res.q_truth, b[0].size());
    EXPECT_NEAR(res.score, oracle::subspace_score_from_gram(a, b, res.r), 1e-8) << "d=" << d << " n=" << n << " k=" << k;
  }
}

TEST(SubspaceProperties, SymmetricAndCosineValidity) {
  std::mt19937_64 rng(89);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 3 + rng() % 20;
    const auto a = basis_of(to_eigen(gaussian(rng, d, 1 + rng() % 5)), 5);
    const auto b = basis_of(to_eigen(gaussian(rng, d, 1 + rng() % 5)), 5);
    const auto ab = canonical_angles(a, b), ba = canonical_angles(b, a);
    ASSERT_EQ(ab.size(), ba.size());
    for (std::size_t i = 0; i < ab.size(); ++i) {
      EXPECT_NEAR(ab.cosines[i], ba.cosines[i], 1e-12);
      EXPECT_GE(ab.raw_cosines[i], 0.0);
      EXPECT_LE(ab.raw_cosines[i], 1.0 + 1e-10);
      EXPECT_GE(ab.cosines[i], 0.0);
      EXPECT_LE(ab.cosines[i], 1.0);
      if (i > 0) EXPECT_LE(ab.cosines[i], ab.cosines[i - 1]);
    }
  }
}

TEST(SubspaceProperties, BasisInvariance) {
  std::mt19937_64 rng(97);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 6 + rng() % 20, qa = 1 + rng() % 4, qb = 1 + rng() % 4;
    auto a = basis_of(to_eigen(gaussian(rng, d, qa)), qa);
    auto b = basis_of(to_eigen(gaussian(rng, d, qb)), qb);
    const double before = subspace_score(canonical_angles(a, b), std::min(qa, qb));
    a.basis = a.basis * to_eigen(oracle::random_orthogonal(qa, rng));
    b.basis = b.basis * to_eigen(oracle::random_orthogonal(qb, rng));
    EXPECT_NEAR(subspace_score(canonical_angles(a, b), std::min(qa, qb)), before, 1e-10);
  }
}

TEST(SubspaceProperties, AmbientRotationInvariance) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 2 + rng() % 30, n = 1 + rng() % 10, k = 1 + rng() % 10;
    const auto m = to_eigen(gaussian(rng, d, n)), g = to_eigen(gaussian(rng, d, k));
    const auto rot = to_eigen(oracle::random_orthogonal(d, rng));
    const auto before = score_subspaces(VectorSet(m), VectorSet(g)).score;
    const auto after = score_subspaces(VectorSet(rot * m), VectorSet(rot * g)).score;
    EXPECT_NEAR(after, before, 1e-8);
  }
}

TEST(SubspaceScores, IdenticalAndOrthogonal) {
  std::mt19937_64 rng(103);
  const auto m = to_eigen(gaussian(rng, 16, 6));
  EXPECT_NEAR(score_subspaces(VectorSet(m), VectorSet(m)).score, 1.0, 1e-10);
  EXPECT_NEAR(score_subspaces(VectorSet(Eigen::MatrixXd(unit(5, 0))), VectorSet(Eigen::MatrixXd(unit(5, 3)))).score, 0.0,
              1e-12);
}

TEST(SubspaceScores, ExplicitQAndR) {
  std::mt19937_64 rng(107);
  const auto m = to_eigen(gaussian(rng, 10, 6)), g = to_eigen(gaussian(rng, 10, 6));
  SubspaceConfig cfg;
  cfg.q = 3;
  cfg.r = 2;
  const auto res = score_subspaces(VectorSet(m), VectorSet(g), cfg);
  EXPECT_EQ(res.q_model, 3u);
  EXPECT_EQ(res.r, 2u);
  EXPECT_NEAR(res.score, (res.cosines[0] * res.cosines[0] + res.cosines[1] * res.cosines[1]) / 2.0, 1e-15);
  cfg.r = 4;
  EXPECT_THROW(score_subspaces(VectorSet(m), VectorSet(g), cfg), ContractError);
}

TEST(SubspaceModule, IdenticalOutputsScoreOne) {
  HashingEmbedder p(256);
  const auto g = qs({"my dog judges me", "i hate mornings", "taxes are a prank"});
  const std::vector<QuoteSet> vars = {qs(g.quotes, "v1"), qs(g.quotes, "v2")};
  EXPECT_NEAR(score_subspace_module(vars, g, p).score, 1.0, 1e-10);
}

TEST(SubspaceModule, DisjointBucketsScoreZero) {
  const std::size_t d = 1024;
  std::set<std::size_t> used;
  std::vector<std::string> toks;
  for (int i = 0; toks.size() < 6; ++i) {
    const std::string t = "w" + std::to_string(i);
    if (used.insert(hash_token(t, d).bucket).second) toks.push_back(t);
  }
  HashingEmbedder p(d);
  const auto g = qs({toks[0] + " " + toks[1], toks[2]});
  const std::vector<QuoteSet> vars = {qs({toks[3], toks[4]}, "v1"), qs({toks[5] + " " + toks[3]}, "v2")};
  EXPECT_NEAR(score_subspace_module(vars, g, p).score, 0.0, 1e-12);
}

TEST(SubspaceModule, MatchesEndToEndOracle) {
  std::mt19937_64 rng(109);
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l"};
  for (int trial = 0; trial < 50; ++trial) {
    HashingEmbedder p(32);
    auto sentence = [&] {
      std::string s;
      for (std::size_t w = 0, n = 1 + rng() % 4; w < n; ++w) s += vocab[rng() % vocab.size()] + " ";
      return s;
    };
    std::vector<QuoteSet> vars;
    oracle::Grid mcols, gcols;
    for (int v = 0; v < 3; ++v) {
      QuoteSet q = qs({}, "v" + std::to_string(v));
      for (std::size_t i = 0, n = 1 + rng() % 3; i < n; ++i) q.quotes.push_back(sentence());
      vars.push_back(q);
    }
    QuoteSet g = qs({});
    for (std::size_t i = 0, n = 1 + rng() % 4; i < n; ++i) g.quotes.push_back(sentence());
    auto columns = [&](const std::vector<std::string>& texts) {
      oracle::Grid x(32, std::vector<double>(texts.size()));
      for (std::size_t c = 0; c < texts.size(); ++c) {
        const auto v = deterministic_test_embedder(texts[c], 32);
        for (std::size_t r = 0; r < 32; ++r) x[r][c] = v[r];
      }
      return x;
    };
    std::vector<std::string> mt;
    for (const auto& v : vars) mt.insert(mt.end(), v.quotes.begin(), v.quotes.end());
    const auto mx = columns(mt), gx = columns(g.quotes);
    // hashed short texts are often orthonormal, so singular values tie and a
    // truncated top-q subspace is not unique; compare the full column spans
    SubspaceConfig cfg;
    cfg.q = 32;
    const auto res = score_subspace_module(vars, g, p, cfg);
    const auto a = oracle::top_left_basis(mx, 32), b = oracle::top_left_basis(gx, 32);
    const std::size_t r = std::min(a[0].size(), b[0].size());
    EXPECT_EQ(res.r, r);
    EXPECT_NEAR(res.score, oracle::subspace_score_from_gram(a, b, r), 1e-8);
  }
}

TEST(SubspaceModule, PreconditionsAndColumnModes) {
  HashingEmbedder p(64);
  const auto g = qs({"x y"});
  EXPECT_THROW(score_subspace_module(std::vector<QuoteSet>{qs({"x"}, "v1")}, g, p), ContractError);
  EXPECT_THROW(score_subspace_module(std::vector<QuoteSet>{qs({"x"}, "v1"), qs({"y"}, "v2")}, qs({}), p),
               UndefinedScoreError);
  EXPECT_THROW(score_subspace_module(std::vector<QuoteSet>{qs({}, "v1"), qs({}, "v2")}, g, p), DegenerateInputError);

  const std::vector<QuoteSet> vars = {qs({"x", "y"}, "v1"), qs({"x"}, "v2"), qs({"q"}, "v3")};
  SubspaceConfig per;
  per.columns = ColumnMode::per_variation;
  EXPECT_EQ(score_subspace_module(vars, g, p, per).model_columns, 3u);
  EXPECT_EQ(score_subspace_module(vars, g, p).model_columns, 4u);
}
