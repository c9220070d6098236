#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "laughtrack/corpus.hpp"
#include "laughtrack/embedding.hpp"

namespace laughtrack {

/// Column matrix of embeddings (d x count). At least one column.
class VectorSet {
 public:
  explicit VectorSet(Eigen::MatrixXd columns);
  explicit VectorSet(std::span<const EmbeddingVector> columns);

  const Eigen::MatrixXd& columns() const { return columns_; }
  std::size_t ambient_dimension() const { return static_cast<std::size_t>(columns_.rows()); }
  std::size_t size() const { return static_cast<std::size_t>(columns_.cols()); }

 private:
  Eigen::MatrixXd columns_;
};

/// Orthonormal basis of a PCA subspace (d x q) with the share of total
/// energy each basis direction captures.
struct SubspaceBasis {
  Eigen::MatrixXd basis;
  std::vector<double> energy;
  /// Numerical rank of the source matrix, which bounds q.
  std::size_t rank = 0;

  std::size_t dimension() const { return static_cast<std::size_t>(basis.cols()); }
  std::size_t ambient_dimension() const { return static_cast<std::size_t>(basis.rows()); }
};

/// Cosines of the canonical angles, descending.
struct CanonicalAngles {
  std::vector<double> cosines;      // clamped to [0,1]
  std::vector<double> raw_cosines;  // singular values as computed

  std::size_t size() const { return cosines.size(); }
  /// Angles in radians, ascending.
  std::vector<double> angles() const;
};

struct PcaOptions {
  /// Subtract the column mean before the decomposition.
  bool centered = false;
  /// Singular values at or below tolerance * sigma_max are treated as zero.
  double rank_tolerance = 1e-10;
};

/// Numerical rank under the same tolerance pca_basis uses.
std::size_t numerical_rank(const VectorSet& x, const PcaOptions& opts = {});

/// Top-q' left singular vectors of the column matrix, q' = min(q, rank).
/// Each basis column is sign-fixed so its largest-magnitude entry is
/// positive. Throws DegenerateInputError for an all-zero matrix.
SubspaceBasis pca_basis(const VectorSet& x, std::size_t q, const PcaOptions& opts = {});

/// Singular values of A^T B. Throws ContractError on an ambient dimension mismatch.
CanonicalAngles canonical_angles(const SubspaceBasis& a, const SubspaceBasis& b);

/// Mean of the squares of the r largest cosines; requires 1 <= r <= size.
double subspace_score(const CanonicalAngles& angles, std::size_t r);

enum class ColumnMode {
  /// Every predicted quote of every variation is one column.
  pooled_quotes,
  /// Each variation's quotes are joined into one text and embedded once.
  per_variation,
};

struct SubspaceConfig {
  std::optional<std::size_t> q;  // default: min(5, rank(M), rank(G))
  std::optional<std::size_t> r;  // default: min(q_M, q_G)
  bool centered = false;
  ColumnMode columns = ColumnMode::pooled_quotes;
  bool normalize_inputs = true;
  double rank_tolerance = 1e-10;
};

struct SubspaceResult {
  double score = 0.0;
  std::size_t model_columns = 0;
  std::size_t truth_columns = 0;
  std::size_t q_model = 0;
  std::size_t q_truth = 0;
  std::size_t r = 0;
  std::vector<double> cosines;
};

inline constexpr std::size_t kDefaultSubspaceDim = 5;

/// Embeds the model outputs of every instruction variation and the ground
/// truth, builds both PCA subspaces and scores their canonical angles.
/// Requires at least two variations and non-empty ground truth.
SubspaceResult score_subspace_module(std::span<const QuoteSet> variations, const QuoteSet& truth,
                                     EmbeddingProvider& provider, const SubspaceConfig& cfg = {});

/// Same, on vectors that are already embedded.
SubspaceResult score_subspaces(const VectorSet& model, const VectorSet& truth, const SubspaceConfig& cfg = {});

}  // namespace laughtrack
