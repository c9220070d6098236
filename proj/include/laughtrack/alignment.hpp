#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "laughtrack/corpus.hpp"

namespace laughtrack {

enum class AttributionRule {
  /// The sentence containing the onset, else the latest sentence that ended
  /// within max_lag_s before it.
  containment_then_preceding,
  /// Only the latest sentence that ended within max_lag_s before the onset.
  strict_preceding,
};

struct AlignmentConfig {
  double min_laughter_s = 0.2;
  double min_probability = 0.5;
  double max_lag_s = 3.0;
  AttributionRule rule = AttributionRule::containment_then_preceding;

  /// Throws ContractError on negative values or min_probability > 1.
  void validate() const;
};

/// Slack on the duration comparison so a 0.2 s event stored as onset/offset
/// pairs like (1.0, 1.2) is not lost to rounding.
inline constexpr double kDurationSlack = 1e-9;

/// Keeps events with duration >= min_laughter_s and probability >=
/// min_probability, in input order.
std::vector<LaughterEvent> filter_laughter(std::span<const LaughterEvent> events, const AlignmentConfig& cfg = {});

struct AlignmentResult {
  /// Attributed sentence texts, deduplicated, in sentence order; source = ground_truth.
  QuoteSet ground_truth;
  std::vector<std::size_t> sentence_indices;
  /// Events no sentence could be attributed to.
  std::vector<LaughterEvent> unattributed;
};

/// Sentence a single laughter onset is attributed to, if any.
std::optional<std::size_t> attribute_onset(std::span<const Sentence> sentences, double onset_s,
                                           const AlignmentConfig& cfg);

/// Maps (already filtered) laughter events onto the transcript's timed
/// sentences. Throws ValidationError when a sentence lacks timings.
AlignmentResult align_ground_truth(const Transcript& timeline, std::span<const LaughterEvent> events,
                                   const AlignmentConfig& cfg = {});

}  // namespace laughtrack
