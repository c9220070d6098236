#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "laughtrack/corpus.hpp"
#include "laughtrack/fuzzy.hpp"

namespace laughtrack {

using Labels = std::vector<bool>;

/// One label row per rater (or model), all the same length.
struct LabelMatrix {
  std::vector<std::string> ids;
  std::vector<Labels> rows;

  std::size_t raters() const { return rows.size(); }
  std::size_t items() const { return rows.empty() ? 0 : rows.front().size(); }
  /// Throws ContractError on ragged rows or an id/row count mismatch.
  void validate() const;
};

/// Fraction of positions where a and b agree. Requires equal, non-zero length.
double pairwise_pa(const Labels& a, const Labels& b);

/// Mean pairwise_pa over all unordered rater pairs. Requires >= 2 rows.
double group_pa(const LabelMatrix& m);

/// Position i is true iff strictly more than half of the rows mark it;
/// ties are false.
Labels majority_labels(const LabelMatrix& m);

inline constexpr double kDefaultProjectionThreshold = 0.8;

/// Sentence i is true iff some quote reaches fuzzy_similarity >= threshold
/// with its text. Threshold must lie in (0, 1].
Labels model_labels_from_quotes(const QuoteSet& quotes, const Transcript& timeline,
                                double match_threshold = kDefaultProjectionThreshold, const FuzzyConfig& cfg = {});

enum class HumanMachineMode {
  /// PA between the model and the strict-majority human labels.
  majority,
  /// Mean PA between the model and each rater.
  mean_over_raters,
};

double human_machine_pa(const LabelMatrix& humans, const Labels& model,
                        HumanMachineMode mode = HumanMachineMode::majority);

/// Builds the label matrix of one transcript from rater rows, validating
/// row lengths against the sentence count. Rows keep input order.
LabelMatrix label_matrix_for(const Transcript& t, const std::vector<RaterLabels>& all_labels);

}  // namespace laughtrack
