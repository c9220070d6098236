#include "laughtrack/pairwise.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <sstream>

#include "laughtrack/error.hpp"

namespace laughtrack {

namespace {

void check_entries(const SimilarityMatrix& s) {
  for (std::size_t i = 0; i < s.rows(); ++i) {
    for (std::size_t j = 0; j < s.cols(); ++j) {
      const double v = s(i, j);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        std::ostringstream os;
        os << "similarity for pair (model " << i << ", ground truth " << j << ") is " << v
           << ", outside [0,1]";
        throw ContractError(os.str());
      }
    }
  }
}

// Wraps a string similarity so an out-of-range value names the texts.
IndexSimilarity named(std::span<const std::string> model, std::span<const std::string> truth,
                      const StringSimilarity& sim) {
  return [model, truth, &sim](std::size_t i, std::size_t j) {
    const double v = sim(model[i], truth[j]);
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      std::ostringstream os;
      os << "similarity(\"" << model[i] << "\", \"" << truth[j] << "\") = " << v << " for pair (model " << i
         << ", ground truth " << j << "), outside [0,1]";
      throw ContractError(os.str());
    }
    return v;
  };
}

}  // namespace

SimilarityMatrix build_similarity_matrix_serial(std::size_t n, std::size_t k, const IndexSimilarity& sim) {
  SimilarityMatrix s(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) s(i, j) = sim(i, j);
  }
  check_entries(s);
  return s;
}

SimilarityMatrix build_similarity_matrix(std::size_t n, std::size_t k, const IndexSimilarity& sim) {
  SimilarityMatrix s(n, k);
  const auto total = static_cast<std::ptrdiff_t>(n * k);
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t flat = 0; flat < total; ++flat) {
    const auto i = static_cast<std::size_t>(flat) / k;
    const auto j = static_cast<std::size_t>(flat) % k;
    try {
      s(i, j) = sim(i, j);
    } catch (...) {
#pragma omp critical(laughtrack_similarity_failure)
      if (!failure) failure = std::current_exception();
    }
  }

  if (failure) std::rethrow_exception(failure);
  check_entries(s);
  return s;
}

SimilarityMatrix build_similarity_matrix(std::span<const std::string> model, std::span<const std::string> truth,
                                         const StringSimilarity& sim) {
  return build_similarity_matrix(model.size(), truth.size(), named(model, truth, sim));
}

SimilarityMatrix build_similarity_matrix_serial(std::span<const std::string> model,
                                                std::span<const std::string> truth, const StringSimilarity& sim) {
  return build_similarity_matrix_serial(model.size(), truth.size(), named(model, truth, sim));
}

SimilarityMatrix build_similarity_matrix(const QuoteSet& model, const QuoteSet& truth, const StringSimilarity& sim) {
  return build_similarity_matrix(std::span<const std::string>(model.quotes), std::span<const std::string>(truth.quotes),
                                 sim);
}

std::vector<double> best_matches(const SimilarityMatrix& s, std::optional<double> match_threshold) {
  std::vector<double> t(s.cols(), 0.0);
  for (std::size_t i = 0; i < s.rows(); ++i) {
    for (std::size_t j = 0; j < s.cols(); ++j) t[j] = std::max(t[j], s(i, j));
  }
  if (match_threshold) {
    for (double& v : t) {
      if (v < *match_threshold) v = 0.0;
    }
  }
  return t;
}

std::size_t overgeneration_penalty(std::size_t n, std::size_t k) { return n > k ? n - k : 0; }

double final_score(std::span<const double> t, std::size_t p, double alpha) {
  if (t.empty()) throw UndefinedScoreError("cannot score a transcript without ground-truth quotes (k = 0)");
  if (!(alpha >= 0.0)) throw ContractError("alpha must be non-negative");
  const double mean = std::accumulate(t.begin(), t.end(), 0.0) / static_cast<double>(t.size());
  return std::clamp(mean - alpha * static_cast<double>(p), 0.0, 1.0);
}

MatchResult score_matrix(const SimilarityMatrix& s, const ScoringOptions& opts) {
  MatchResult r;
  r.alpha = opts.alpha;
  r.best_per_ground_truth = best_matches(s, opts.match_threshold);
  r.penalty_count = overgeneration_penalty(s.rows(), s.cols());
  r.final_score = final_score(r.best_per_ground_truth, r.penalty_count, opts.alpha);
  return r;
}

MatchResult score_quote_sets(const QuoteSet& model, const QuoteSet& truth, const StringSimilarity& sim,
                             const ScoringOptions& opts) {
  if (truth.empty()) throw UndefinedScoreError("transcript '" + truth.transcript_id + "' has no ground-truth quotes");
  return score_matrix(build_similarity_matrix(model, truth, sim), opts);
}

}  // namespace laughtrack
