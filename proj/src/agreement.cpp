#include "laughtrack/agreement.hpp"

#include "laughtrack/error.hpp"
#include "laughtrack/text.hpp"

namespace laughtrack {

void LabelMatrix::validate() const {
  if (ids.size() != rows.size()) throw ContractError("label matrix has mismatched id and row counts");
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != rows.front().size()) {
      throw ContractError("label row '" + ids[r] + "' has " + std::to_string(rows[r].size()) + " labels, expected " +
                          std::to_string(rows.front().size()));
    }
  }
}

double pairwise_pa(const Labels& a, const Labels& b) {
  if (a.size() != b.size()) {
    throw ContractError("label vectors differ in length: " + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()));
  }
  if (a.empty()) throw ContractError("percentage agreement needs at least one item");
  std::size_t agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) agree += a[i] == b[i] ? 1 : 0;
  return static_cast<double>(agree) / static_cast<double>(a.size());
}

double group_pa(const LabelMatrix& m) {
  m.validate();
  if (m.raters() < 2) throw ContractError("group agreement needs at least 2 raters");
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < m.raters(); ++a) {
    for (std::size_t b = a + 1; b < m.raters(); ++b) {
      sum += pairwise_pa(m.rows[a], m.rows[b]);
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

Labels majority_labels(const LabelMatrix& m) {
  m.validate();
  if (m.raters() == 0) throw ContractError("majority vote needs at least 1 rater");
  Labels out(m.items(), false);
  for (std::size_t i = 0; i < m.items(); ++i) {
    std::size_t votes = 0;
    for (const auto& row : m.rows) votes += row[i] ? 1 : 0;
    out[i] = 2 * votes > m.raters();
  }
  return out;
}

Labels model_labels_from_quotes(const QuoteSet& quotes, const Transcript& timeline, double match_threshold,
                                const FuzzyConfig& cfg) {
  if (!(match_threshold > 0.0 && match_threshold <= 1.0)) {
    throw ContractError("projection threshold must lie in (0, 1]");
  }
  Labels out(timeline.sentences.size(), false);
  for (std::size_t i = 0; i < timeline.sentences.size(); ++i) {
    for (const auto& q : quotes.quotes) {
      if (fuzzy_similarity(q, timeline.sentences[i].text, cfg) >= match_threshold) {
        out[i] = true;
        break;
      }
    }
  }
  return out;
}

double human_machine_pa(const LabelMatrix& humans, const Labels& model, HumanMachineMode mode) {
  humans.validate();
  if (humans.raters() == 0) throw ContractError("human-machine agreement needs at least 1 rater");
  if (mode == HumanMachineMode::majority) return pairwise_pa(majority_labels(humans), model);
  double sum = 0.0;
  for (const auto& row : humans.rows) sum += pairwise_pa(row, model);
  return sum / static_cast<double>(humans.raters());
}

LabelMatrix label_matrix_for(const Transcript& t, const std::vector<RaterLabels>& all_labels) {
  LabelMatrix m;
  for (const auto& r : all_labels) {
    if (r.transcript_id != t.id) continue;
    validate(r, t);
    m.ids.push_back(r.rater_id);
    m.rows.push_back(r.labels);
  }
  return m;
}

}  // namespace laughtrack
