#include "laughtrack/subspace.hpp"

#include <algorithm>
#include <cmath>

#include "laughtrack/error.hpp"
#include "laughtrack/text.hpp"

namespace laughtrack {

VectorSet::VectorSet(Eigen::MatrixXd columns) : columns_(std::move(columns)) {
  if (columns_.cols() == 0 || columns_.rows() == 0) throw ContractError("a vector set needs at least one column");
  if (!columns_.allFinite()) throw ContractError("vector set has non-finite entries");
}

namespace {

Eigen::MatrixXd stack(std::span<const EmbeddingVector> columns) {
  if (columns.empty()) throw ContractError("a vector set needs at least one column");
  const auto d = columns.front().dimension();
  Eigen::MatrixXd x(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].dimension() != d) {
      throw ContractError("vector set column " + std::to_string(c) + " has dimension " +
                          std::to_string(columns[c].dimension()) + ", expected " + std::to_string(d));
    }
    for (std::size_t r = 0; r < d; ++r) x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = columns[c][r];
  }
  return x;
}

Eigen::MatrixXd prepared(const VectorSet& x, const PcaOptions& opts) {
  Eigen::MatrixXd m = x.columns();
  if (opts.centered) m.colwise() -= m.rowwise().mean();
  if (m.cwiseAbs().maxCoeff() == 0.0) throw DegenerateInputError("PCA input matrix is all zero");
  return m;
}

std::size_t rank_of(const Eigen::VectorXd& sigma, double tolerance) {
  if (sigma.size() == 0 || sigma(0) <= 0.0) return 0;
  const double cutoff = tolerance * sigma(0);
  std::size_t rank = 0;
  while (rank < static_cast<std::size_t>(sigma.size()) && sigma(static_cast<Eigen::Index>(rank)) > cutoff) ++rank;
  return rank;
}

}  // namespace

VectorSet::VectorSet(std::span<const EmbeddingVector> columns) : VectorSet(stack(columns)) {}

std::vector<double> CanonicalAngles::angles() const {
  std::vector<double> out;
  out.reserve(cosines.size());
  for (double c : cosines) out.push_back(std::acos(c));
  return out;
}

std::size_t numerical_rank(const VectorSet& x, const PcaOptions& opts) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(prepared(x, opts));
  return rank_of(svd.singularValues(), opts.rank_tolerance);
}

SubspaceBasis pca_basis(const VectorSet& x, std::size_t q, const PcaOptions& opts) {
  if (q == 0) throw ContractError("requested subspace dimension must be >= 1");
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(prepared(x, opts), Eigen::ComputeThinU);
  const Eigen::VectorXd& sigma = svd.singularValues();

  SubspaceBasis out;
  out.rank = rank_of(sigma, opts.rank_tolerance);
  if (out.rank == 0) throw DegenerateInputError("PCA input matrix has numerical rank 0");
  const auto kept = static_cast<Eigen::Index>(std::min(q, out.rank));
  out.basis = svd.matrixU().leftCols(kept);

  for (Eigen::Index c = 0; c < kept; ++c) {
    Eigen::Index peak = 0;
    out.basis.col(c).cwiseAbs().maxCoeff(&peak);
    if (out.basis(peak, c) < 0.0) out.basis.col(c) *= -1.0;
  }

  const double total = sigma.squaredNorm();
  out.energy.reserve(static_cast<std::size_t>(kept));
  for (Eigen::Index c = 0; c < kept; ++c) out.energy.push_back(sigma(c) * sigma(c) / total);
  return out;
}

CanonicalAngles canonical_angles(const SubspaceBasis& a, const SubspaceBasis& b) {
  if (a.ambient_dimension() != b.ambient_dimension()) {
    throw ContractError("subspaces live in different ambient dimensions: " + std::to_string(a.ambient_dimension()) +
                        " vs " + std::to_string(b.ambient_dimension()));
  }
  const Eigen::MatrixXd product = a.basis.transpose() * b.basis;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(product);
  CanonicalAngles out;
  const auto& sigma = svd.singularValues();
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    out.raw_cosines.push_back(sigma(i));
    out.cosines.push_back(std::clamp(sigma(i), 0.0, 1.0));
  }
  return out;
}

double subspace_score(const CanonicalAngles& angles, std::size_t r) {
  if (r < 1 || r > angles.size()) {
    throw ContractError("number of canonical angles r = " + std::to_string(r) + " outside [1, " +
                        std::to_string(angles.size()) + "]");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < r; ++i) sum += angles.cosines[i] * angles.cosines[i];
  return std::clamp(sum / static_cast<double>(r), 0.0, 1.0);
}

SubspaceResult score_subspaces(const VectorSet& model, const VectorSet& truth, const SubspaceConfig& cfg) {
  const PcaOptions pca{cfg.centered, cfg.rank_tolerance};
  const std::size_t q =
      cfg.q.value_or(std::min({kDefaultSubspaceDim, numerical_rank(model, pca), numerical_rank(truth, pca)}));
  if (q == 0) throw DegenerateInputError("a vector set has numerical rank 0");

  const auto model_basis = pca_basis(model, q, pca);
  const auto truth_basis = pca_basis(truth, q, pca);
  const auto angles = canonical_angles(model_basis, truth_basis);

  SubspaceResult out;
  out.model_columns = model.size();
  out.truth_columns = truth.size();
  out.q_model = model_basis.dimension();
  out.q_truth = truth_basis.dimension();
  out.r = cfg.r.value_or(std::min(out.q_model, out.q_truth));
  out.score = subspace_score(angles, out.r);
  out.cosines = angles.cosines;
  return out;
}

SubspaceResult score_subspace_module(std::span<const QuoteSet> variations, const QuoteSet& truth,
                                     EmbeddingProvider& provider, const SubspaceConfig& cfg) {
  if (variations.size() < 2) {
    throw ContractError("subspace scoring needs at least 2 instruction variations, got " +
                        std::to_string(variations.size()));
  }
  if (truth.empty()) throw UndefinedScoreError("transcript '" + truth.transcript_id + "' has no ground-truth quotes");

  auto prep = [&](const std::string& s) { return cfg.normalize_inputs ? normalize_text(s) : s; };

  std::vector<std::string> model_texts;
  for (const auto& v : variations) {
    if (cfg.columns == ColumnMode::pooled_quotes) {
      for (const auto& q : v.quotes) model_texts.push_back(prep(q));
    } else if (!v.empty()) {
      std::string joined;
      for (const auto& q : v.quotes) {
        if (!joined.empty()) joined += ' ';
        joined += q;
      }
      model_texts.push_back(prep(joined));
    }
  }
  if (model_texts.empty()) throw DegenerateInputError("no predicted quotes across the instruction variations");

  std::vector<std::string> truth_texts;
  for (const auto& q : truth.quotes) truth_texts.push_back(prep(q));

  const auto m = provider.embed(model_texts);
  const auto g = provider.embed(truth_texts);
  return score_subspaces(VectorSet(std::span<const EmbeddingVector>(m)), VectorSet(std::span<const EmbeddingVector>(g)),
                         cfg);
}

}  // namespace laughtrack
