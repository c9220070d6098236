#include "laughtrack/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "laughtrack/error.hpp"
#include "laughtrack/text.hpp"

namespace laughtrack {

void AlignmentConfig::validate() const {
  if (!(min_laughter_s >= 0.0) || !(min_probability >= 0.0) || !(max_lag_s >= 0.0)) {
    throw ContractError("alignment thresholds must be non-negative");
  }
  if (min_probability > 1.0) throw ContractError("min_probability must be <= 1");
}

std::vector<LaughterEvent> filter_laughter(std::span<const LaughterEvent> events, const AlignmentConfig& cfg) {
  cfg.validate();
  std::vector<LaughterEvent> kept;
  for (const auto& e : events) {
    if (e.duration() + kDurationSlack >= cfg.min_laughter_s && e.probability >= cfg.min_probability) {
      kept.push_back(e);
    }
  }
  return kept;
}

std::optional<std::size_t> attribute_onset(std::span<const Sentence> sentences, double onset_s,
                                           const AlignmentConfig& cfg) {
  if (cfg.rule == AttributionRule::containment_then_preceding) {
    for (const auto& s : sentences) {
      if (*s.start_s <= onset_s && onset_s < *s.end_s) return s.index;
    }
  }
  // sentences are ordered and non-overlapping, so the last one that ended by
  // the onset is the latest predecessor
  std::optional<std::size_t> preceding;
  for (const auto& s : sentences) {
    if (*s.end_s <= onset_s) preceding = s.index;
  }
  if (preceding && onset_s - *sentences[*preceding].end_s <= cfg.max_lag_s) return preceding;
  return std::nullopt;
}

AlignmentResult align_ground_truth(const Transcript& timeline, std::span<const LaughterEvent> events,
                                   const AlignmentConfig& cfg) {
  cfg.validate();
  for (const auto& s : timeline.sentences) {
    if (!s.timed()) {
      throw ValidationError("transcript '" + timeline.id + "': sentence " + std::to_string(s.index) +
                            " has no timings; cannot align laughter");
    }
  }

  AlignmentResult out;
  out.ground_truth.transcript_id = timeline.id;
  out.ground_truth.source = QuoteSource::ground_truth;

  std::set<std::size_t> attributed;
  for (const auto& e : events) {
    if (auto idx = attribute_onset(timeline.sentences, e.onset_s, cfg)) {
      attributed.insert(*idx);
    } else {
      out.unattributed.push_back(e);
    }
  }
  std::set<std::string> seen_texts;
  for (std::size_t idx : attributed) {
    const auto& text = timeline.sentences[idx].text;
    if (normalize_text(text).empty() || !seen_texts.insert(text).second) continue;
    out.sentence_indices.push_back(idx);
    out.ground_truth.quotes.push_back(timeline.sentences[idx].text);
  }
  return out;
}

}  // namespace laughtrack
