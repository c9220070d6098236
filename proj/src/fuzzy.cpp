#include "laughtrack/fuzzy.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "laughtrack/error.hpp"
#include "laughtrack/text.hpp"

namespace laughtrack {

std::size_t levenshtein_distance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  // b is the shorter string; one row of |b|+1 cells
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t above = row[j];
      const std::size_t substitute = diagonal + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({above + 1, row[j - 1] + 1, substitute});
      diagonal = above;
    }
  }
  return row[b.size()];
}

std::size_t levenshtein_distance(std::string_view a, std::string_view b) {
  return levenshtein_distance(decode_utf8(a), decode_utf8(b));
}

double fuzzy_similarity_u32(std::u32string_view a, std::u32string_view b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  const auto d = levenshtein_distance(a, b);
  return 1.0 - static_cast<double>(d) / static_cast<double>(longest);
}

namespace {

std::u32string prepare(std::string_view s, const FuzzyConfig& cfg) {
  return cfg.normalize_inputs ? normalize_text_u32(s) : decode_utf8(s);
}

std::vector<std::u32string> prepare_all(const QuoteSet& q, const FuzzyConfig& cfg) {
  std::vector<std::u32string> out;
  out.reserve(q.size());
  for (const auto& s : q.quotes) out.push_back(prepare(s, cfg));
  return out;
}

}  // namespace

double fuzzy_similarity(std::string_view a, std::string_view b, const FuzzyConfig& cfg) {
  return fuzzy_similarity_u32(prepare(a, cfg), prepare(b, cfg));
}

StringSimilarity fuzzy_similarity_fn(const FuzzyConfig& cfg) {
  return [cfg](const std::string& a, const std::string& b) { return fuzzy_similarity(a, b, cfg); };
}

SimilarityMatrix fuzzy_similarity_matrix(const QuoteSet& model, const QuoteSet& truth, const FuzzyConfig& cfg) {
  const auto m = prepare_all(model, cfg);
  const auto g = prepare_all(truth, cfg);
  return build_similarity_matrix(m.size(), g.size(),
                                 [&](std::size_t i, std::size_t j) { return fuzzy_similarity_u32(m[i], g[j]); });
}

SimilarityMatrix fuzzy_similarity_matrix_serial(const QuoteSet& model, const QuoteSet& truth,
                                                const FuzzyConfig& cfg) {
  const auto m = prepare_all(model, cfg);
  const auto g = prepare_all(truth, cfg);
  return build_similarity_matrix_serial(
      m.size(), g.size(), [&](std::size_t i, std::size_t j) { return fuzzy_similarity_u32(m[i], g[j]); });
}

MatchResult score_fuzzy(const QuoteSet& model, const QuoteSet& truth, const FuzzyConfig& cfg,
                        std::optional<double> match_threshold) {
  if (!(cfg.alpha >= 0.0)) throw ContractError("alpha must be non-negative");
  if (truth.empty()) throw UndefinedScoreError("transcript '" + truth.transcript_id + "' has no ground-truth quotes");
  return score_matrix(fuzzy_similarity_matrix(model, truth, cfg), {cfg.alpha, match_threshold});
}

}  // namespace laughtrack
