#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "laughtrack/corpus.hpp"

namespace laughtrack {

/// n x k grid of similarities in [0,1]; rows are model quotes, columns are
/// ground-truth quotes. Row-major storage.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  SimilarityMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }
  std::span<const double> values() const { return values_; }

  bool operator==(const SimilarityMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

using StringSimilarity = std::function<double(const std::string&, const std::string&)>;
/// Similarity addressed by (model index, ground-truth index).
using IndexSimilarity = std::function<double(std::size_t, std::size_t)>;

struct MatchResult {
  std::vector<double> best_per_ground_truth;  // t_j
  std::size_t penalty_count = 0;              // max(n - k, 0)
  double alpha = 0.1;
  double final_score = 0.0;
};

struct ScoringOptions {
  double alpha = 0.1;
  /// Column maxima below this value count as unmatched (0). Off by default,
  /// in which case the plain column maximum is used.
  std::optional<double> match_threshold;
};

// Matrix construction. The parallel kernels split the n*k entries across
// OpenMP threads; the _serial variants are the straight double loop and are
// kept as the reference. Both throw ContractError naming the offending pair
// when sim returns a non-finite value or one outside [0,1], and rethrow the
// first exception raised by sim.
SimilarityMatrix build_similarity_matrix(std::size_t n, std::size_t k, const IndexSimilarity& sim);
SimilarityMatrix build_similarity_matrix_serial(std::size_t n, std::size_t k, const IndexSimilarity& sim);
SimilarityMatrix build_similarity_matrix(std::span<const std::string> model, std::span<const std::string> truth,
                                         const StringSimilarity& sim);
SimilarityMatrix build_similarity_matrix_serial(std::span<const std::string> model,
                                                std::span<const std::string> truth, const StringSimilarity& sim);
SimilarityMatrix build_similarity_matrix(const QuoteSet& model, const QuoteSet& truth, const StringSimilarity& sim);

/// Column-wise maximum. With zero rows every entry is 0.
std::vector<double> best_matches(const SimilarityMatrix& s, std::optional<double> match_threshold = std::nullopt);

std::size_t overgeneration_penalty(std::size_t n, std::size_t k);

/// max(mean(t) - alpha * p, 0). Throws UndefinedScoreError when t is empty.
double final_score(std::span<const double> t, std::size_t p, double alpha);

/// Best match, penalty and final score for an already built matrix.
MatchResult score_matrix(const SimilarityMatrix& s, const ScoringOptions& opts = {});

MatchResult score_quote_sets(const QuoteSet& model, const QuoteSet& truth, const StringSimilarity& sim,
                             const ScoringOptions& opts = {});

}  // namespace laughtrack
