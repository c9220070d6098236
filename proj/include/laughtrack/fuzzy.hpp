#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "laughtrack/pairwise.hpp"

namespace laughtrack {

struct FuzzyConfig {
  bool normalize_inputs = true;
  double alpha = 0.1;
};

/// Unit-cost edit distance over Unicode scalar values, two-row DP.
std::size_t levenshtein_distance(std::u32string_view a, std::u32string_view b);
/// UTF-8 convenience overload; decodes first so a multi-byte character is one edit.
std::size_t levenshtein_distance(std::string_view a, std::string_view b);

/// 1 - d(a', b') / max(|a'|, |b'|), where a' and b' are the inputs after
/// optional normalization. Two empty strings are identical (1.0).
double fuzzy_similarity(std::string_view a, std::string_view b, const FuzzyConfig& cfg = {});
double fuzzy_similarity_u32(std::u32string_view a, std::u32string_view b);

StringSimilarity fuzzy_similarity_fn(const FuzzyConfig& cfg = {});

/// Decodes (and normalizes) every quote once, then fills the matrix.
SimilarityMatrix fuzzy_similarity_matrix(const QuoteSet& model, const QuoteSet& truth, const FuzzyConfig& cfg = {});
SimilarityMatrix fuzzy_similarity_matrix_serial(const QuoteSet& model, const QuoteSet& truth,
                                                const FuzzyConfig& cfg = {});

MatchResult score_fuzzy(const QuoteSet& model, const QuoteSet& truth, const FuzzyConfig& cfg = {},
                        std::optional<double> match_threshold = std::nullopt);

}  // namespace laughtrack
