#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace laughtrack {

struct Sentence {
  std::size_t index = 0;
  std::string text;
  std::optional<double> start_s;
  std::optional<double> end_s;

  bool timed() const { return start_s.has_value() && end_s.has_value(); }
  bool operator==(const Sentence&) const = default;
};

struct Transcript {
  std::string id;
  std::optional<std::string> comedian;
  std::vector<Sentence> sentences;
  std::string raw_text;

  bool operator==(const Transcript&) const = default;
};

enum class QuoteSource { model, ground_truth, human_rater };

std::string_view to_string(QuoteSource s);
QuoteSource quote_source_from_string(std::string_view s);

/// Candidate humorous quotes for one transcript. Duplicates are allowed.
struct QuoteSet {
  std::string transcript_id;
  QuoteSource source = QuoteSource::model;
  std::vector<std::string> quotes;
  /// Groups instruction variations for the subspace module.
  std::optional<std::string> variation_id;
  /// Name of the system that produced the quotes, when several are compared.
  std::optional<std::string> model;

  std::size_t size() const { return quotes.size(); }
  bool empty() const { return quotes.empty(); }
  bool operator==(const QuoteSet&) const = default;
};

struct LaughterEvent {
  double onset_s = 0.0;
  double offset_s = 0.0;
  double probability = 0.0;

  double duration() const { return offset_s - onset_s; }
  bool operator==(const LaughterEvent&) const = default;
};

struct LaughterTrack {
  std::string transcript_id;
  std::vector<LaughterEvent> events;
};

struct RaterLabels {
  std::string rater_id;
  std::string transcript_id;
  std::vector<bool> labels;
};

// Invariant checks. Each throws ValidationError naming the transcript and field.
void validate(const Transcript& t);
void validate(const LaughterEvent& e, std::string_view transcript_id);
void validate(const RaterLabels& r, const Transcript& t);

// JSON mapping, one object per JSONL line.
nlohmann::json to_json(const Transcript& t);
nlohmann::json to_json(const QuoteSet& q);
nlohmann::json to_json(const LaughterTrack& l);
nlohmann::json to_json(const RaterLabels& r);
Transcript transcript_from_json(const nlohmann::json& j);
QuoteSet quote_set_from_json(const nlohmann::json& j);
LaughterTrack laughter_from_json(const nlohmann::json& j);
RaterLabels rater_labels_from_json(const nlohmann::json& j);

/// Loads a corpus JSONL file and validates every transcript, including id
/// uniqueness. Blank lines are skipped.
std::vector<Transcript> load_corpus(const std::filesystem::path& path);
std::vector<Transcript> parse_corpus(std::istream& in, const std::string& name = "<stream>");

std::vector<QuoteSet> load_quote_sets(const std::filesystem::path& path);
std::vector<QuoteSet> parse_quote_sets(std::istream& in, const std::string& name = "<stream>");

std::vector<LaughterTrack> load_laughter(const std::filesystem::path& path);
std::vector<LaughterTrack> parse_laughter(std::istream& in, const std::string& name = "<stream>");

std::vector<RaterLabels> load_rater_labels(const std::filesystem::path& path);
std::vector<RaterLabels> parse_rater_labels(std::istream& in, const std::string& name = "<stream>");

void write_jsonl(std::ostream& out, const std::vector<Transcript>& corpus);
void write_jsonl(std::ostream& out, const std::vector<QuoteSet>& sets);
void write_jsonl(std::ostream& out, const std::vector<LaughterTrack>& tracks);
void write_jsonl(std::ostream& out, const std::vector<RaterLabels>& labels);

/// Splits raw LLM output into quotes, one per line. Enumeration markers
/// ("1.", "2)"), bullets ("-", "*", "•") and surrounding quotation marks are
/// stripped; lines that normalize to nothing are dropped. Explanation-style
/// lines are kept as quotes.
QuoteSet parse_quote_list(std::string_view raw_llm_output, std::string transcript_id = {});

}  // namespace laughtrack
