#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "laughtrack/agreement.hpp"
#include "laughtrack/alignment.hpp"
#include "laughtrack/corpus.hpp"
#include "laughtrack/embedding.hpp"
#include "laughtrack/subspace.hpp"

namespace laughtrack {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Module { fuzzy, embed, subspace };
std::string_view to_string(Module m);
Module module_from_string(std::string_view s);

struct ProviderSettings {
  /// hash | precomputed | http | openai
  std::string kind = "hash";
  std::size_t dimension = 256;
  std::string vectors_path;
  std::string base_url;
  std::string model;
  double timeout_s = 30.0;
  int retries = 2;
  /// On-disk embedding cache; empty keeps the cache in memory.
  std::string cache_path;
};

/// Builds the provider described by the settings. The API key is taken
/// from EMBED_API_KEY and never stored in reports.
std::unique_ptr<EmbeddingProvider> make_provider(const ProviderSettings& s);

struct RunConfig {
  Module module = Module::fuzzy;
  double alpha = 0.1;
  std::optional<double> threshold;
  bool normalize_inputs = true;
  ProviderSettings provider;
  std::optional<std::size_t> q;
  std::optional<std::size_t> r;
  bool centered = false;
  ColumnMode columns = ColumnMode::pooled_quotes;
  std::string corpus_path;  // optional
  std::string ground_truth_path;
  std::string predictions_path;
  bool strict = false;
  bool percent = false;
  std::uint64_t seed = 0;
  /// 0 uses every logical core.
  std::size_t workers = 0;

  /// Throws ContractError on missing paths or out-of-range settings.
  void validate() const;
};

nlohmann::json to_json(const RunConfig& c);
RunConfig run_config_from_json(const nlohmann::json& j);

struct VariationScore {
  std::string variation_id;
  double score = 0.0;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t penalty = 0;
};

struct TranscriptScore {
  std::string transcript_id;
  double score = 0.0;
  /// Predicted quotes (summed over variations) and ground-truth quotes.
  std::size_t n = 0;
  std::size_t k = 0;
  /// Over-generation penalty count, summed over variations.
  std::size_t penalty = 0;
  std::vector<VariationScore> variations;  // fuzzy/embed with more than one variation
  std::optional<SubspaceResult> subspace;
};

struct SkippedTranscript {
  std::string transcript_id;
  std::string reason;
};

struct ScoreReport {
  std::vector<TranscriptScore> per_transcript;  // sorted by transcript id
  std::vector<SkippedTranscript> skipped;       // sorted by transcript id
  std::optional<double> aggregate;              // mean over scored transcripts
  std::vector<std::string> warnings;
  RunConfig config;
  std::string tool_version = kToolVersion;
};

ScoreReport cmd_score(const RunConfig& cfg);
/// Scores already loaded inputs; cmd_score loads files and delegates here.
ScoreReport score_corpus(const RunConfig& cfg, const std::vector<QuoteSet>& ground_truth,
                         const std::vector<QuoteSet>& predictions, const std::vector<Transcript>* corpus,
                         EmbeddingProvider* provider);

nlohmann::json to_json(const ScoreReport& r);
std::string to_csv(const ScoreReport& r);

struct AlignReport {
  std::vector<QuoteSet> ground_truth;  // corpus order, one per transcript
  std::vector<std::string> warnings;
  std::size_t events_total = 0;
  std::size_t events_kept = 0;
  std::size_t events_unattributed = 0;
};

AlignReport cmd_align(const std::string& corpus_path, const std::string& laughter_path, const AlignmentConfig& cfg);
AlignReport align_corpus(const std::vector<Transcript>& corpus, const std::vector<LaughterTrack>& laughter,
                         const AlignmentConfig& cfg);

struct AgreementConfig {
  std::string labels_path;
  std::string predictions_path;  // optional
  std::string corpus_path;
  double threshold = kDefaultProjectionThreshold;
  HumanMachineMode mode = HumanMachineMode::majority;
  bool normalize_inputs = true;
  bool percent = false;
};

nlohmann::json to_json(const AgreementConfig& c);

struct PairAgreement {
  std::string a;
  std::string b;
  double pa = 0.0;
};

struct TranscriptAgreement {
  std::string transcript_id;
  std::size_t sentences = 0;
  std::size_t raters = 0;
  std::optional<double> group_pa;
  std::vector<PairAgreement> pairs;
  std::size_t majority_positive = 0;
  std::vector<std::pair<std::string, double>> human_machine;  // model name -> PA, sorted by name
};

struct AgreementReport {
  std::vector<TranscriptAgreement> per_transcript;  // corpus order
  std::optional<double> mean_group_pa;
  std::vector<std::pair<std::string, double>> mean_human_machine;
  std::vector<std::string> warnings;
  AgreementConfig config;
  std::string tool_version = kToolVersion;
};

AgreementReport cmd_agreement(const AgreementConfig& cfg);
AgreementReport agreement_for(const AgreementConfig& cfg, const std::vector<Transcript>& corpus,
                              const std::vector<RaterLabels>& labels, const std::vector<QuoteSet>& predictions);

nlohmann::json to_json(const AgreementReport& r);
std::string to_csv(const AgreementReport& r);

/// Shortest JSON text of a report or config, with a trailing newline.
std::string dump_report(const nlohmann::json& j);

}  // namespace laughtrack
