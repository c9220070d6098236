// laughtrack: score humor-detection output against laughter-derived ground truth.
//
//   laughtrack align     --corpus c.jsonl --laughter l.jsonl --out gt.jsonl
//   laughtrack score     --ground-truth gt.jsonl --predictions p.jsonl --module fuzzy
//   laughtrack agreement --labels r.jsonl --corpus c.jsonl [--predictions p.jsonl]
//   laughtrack self-test [--seed N] [--write-fixture DIR]
//
// Exit codes: 0 success, 1 usage or I/O error, 2 skipped transcripts under --strict.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "laughtrack/commands.hpp"
#include "laughtrack/error.hpp"
#include "laughtrack/fuzzy.hpp"
#include "laughtrack/synth.hpp"

namespace {

using namespace laughtrack;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitStrictSkip = 2;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error("cannot write '" + out_path + "'");
  out << text;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

double env_double(const char* name, double fallback) {
  const char* v = std::getenv(name);
  return v ? std::stod(v) : fallback;
}

int env_int(const char* name, int fallback) {
  const char* v = std::getenv(name);
  return v ? std::stoi(v) : fallback;
}

RunConfig config_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  const auto j = nlohmann::json::parse(in);
  return run_config_from_json(j.contains("config") ? j.at("config") : j);
}

// Each check prints one line; returns false on failure.
bool check(const std::string& name, bool ok, const std::string& detail = {}) {
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << '\n';
  return ok;
}

int run_self_test(std::uint64_t seed, const std::string& fixture_dir) {
  const auto started = std::chrono::steady_clock::now();
  SyntheticOptions opts;
  opts.seed = seed;
  const auto fixture = make_synthetic_fixture(opts);
  const auto aligned = align_corpus(fixture.corpus, fixture.laughter, AlignmentConfig{});

  if (!fixture_dir.empty()) {
    write_fixture(fixture, fixture_dir);
    std::ofstream gt(std::filesystem::path(fixture_dir) / "ground_truth.jsonl");
    write_jsonl(gt, aligned.ground_truth);
    std::cout << "fixture written to " << fixture_dir << '\n';
  }

  bool ok = true;
  ok &= check("levenshtein kitten/sitting = 3", levenshtein_distance(std::string_view("kitten"), "sitting") == 3);
  ok &= check("fuzzy kitten/sitting = 1 - 3/7",
              std::abs(fuzzy_similarity("kitten", "sitting") - (1.0 - 3.0 / 7.0)) < 1e-15);

  std::size_t gt_quotes = 0;
  for (const auto& g : aligned.ground_truth) gt_quotes += g.size();
  ok &= check("alignment produced ground truth", gt_quotes > 0, std::to_string(gt_quotes) + " quotes");

  // predictions equal to the ground truth, three variations each
  std::vector<QuoteSet> perfect;
  for (const auto& g : aligned.ground_truth) {
    for (int v = 1; v <= 3; ++v) {
      QuoteSet q = g;
      q.source = QuoteSource::model;
      q.variation_id = "v" + std::to_string(v);
      perfect.push_back(q);
    }
  }

  for (Module m : {Module::fuzzy, Module::embed, Module::subspace}) {
    RunConfig cfg;
    cfg.module = m;
    cfg.provider.kind = "hash";
    cfg.workers = 1;
    HashingEmbedder provider(cfg.provider.dimension);
    const auto ideal = score_corpus(cfg, aligned.ground_truth, perfect, &fixture.corpus, &provider);
    const bool all_one = ideal.aggregate && std::abs(*ideal.aggregate - 1.0) < 1e-10;
    ok &= check(std::string(to_string(m)) + ": ground truth scores itself 1.0", all_one);

    const auto real = score_corpus(cfg, aligned.ground_truth, fixture.predictions, &fixture.corpus, &provider);
    bool in_range = real.aggregate.has_value();
    for (const auto& t : real.per_transcript) in_range = in_range && t.score >= 0.0 && t.score <= 1.0;
    std::ostringstream detail;
    if (real.aggregate) detail << "aggregate " << *real.aggregate;
    ok &= check(std::string(to_string(m)) + ": synthetic predictions score within [0,1]", in_range, detail.str());
  }

  AgreementConfig acfg;
  const auto agreement = agreement_for(acfg, fixture.corpus, fixture.labels, fixture.predictions);
  ok &= check("agreement: group PA computed for every transcript",
              agreement.per_transcript.size() == fixture.corpus.size() && agreement.mean_group_pa.has_value());

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  std::cout << (ok ? "self-test passed" : "self-test FAILED") << " in " << seconds << " s\n";
  return ok ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Score humor-detection output against laughter-derived ground truth"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  // score
  RunConfig run;
  std::string module = "fuzzy";
  std::string columns = "pooled";
  std::string config_path;
  std::string out_path;
  bool csv = false;
  bool no_normalize = false;
  double threshold = -1.0;
  std::size_t q = 0, r = 0;
  run.provider.timeout_s = env_double("EMBED_TIMEOUT_S", run.provider.timeout_s);
  run.provider.retries = env_int("EMBED_RETRIES", run.provider.retries);

  auto* score = app.add_subcommand("score", "Score predictions against ground truth");
  score->add_option("--ground-truth", run.ground_truth_path, "Ground-truth quotes (predictions-format JSONL)");
  score->add_option("--predictions", run.predictions_path, "Model predictions JSONL");
  score->add_option("--corpus", run.corpus_path, "Corpus JSONL, used to cross-check transcript ids");
  score->add_option("--module", module, "Scoring module")->check(CLI::IsMember({"fuzzy", "embed", "subspace"}));
  score->add_option("--alpha", run.alpha, "Over-generation penalty scale")->check(CLI::NonNegativeNumber);
  score->add_option("--threshold", threshold, "Minimum best-match similarity counted as a match (off by default)")
      ->check(CLI::Range(0.0, 1.0));
  score->add_option("--q", q, "Subspace dimension (default min(5, ranks))")->check(CLI::PositiveNumber);
  score->add_option("--r", r, "Canonical angles used (default all)")->check(CLI::PositiveNumber);
  score->add_flag("--centered", run.centered, "Mean-center before PCA");
  score->add_option("--columns", columns, "Subspace columns for model output")
      ->check(CLI::IsMember({"pooled", "per-variation"}));
  score->add_option("--provider", run.provider.kind, "Embedding provider")
      ->check(CLI::IsMember({"hash", "precomputed", "http", "openai"}));
  score->add_option("--embed-dim", run.provider.dimension, "Hashing embedder dimension")->check(CLI::Range(8, 1 << 20));
  score->add_option("--vectors", run.provider.vectors_path, "Precomputed vectors JSONL");
  score->add_option("--embed-url", run.provider.base_url, "Embedding service base URL (default $EMBED_BASE_URL)");
  score->add_option("--embed-model", run.provider.model, "Embedding model name");
  score->add_option("--embed-timeout", run.provider.timeout_s, "HTTP timeout in seconds (default $EMBED_TIMEOUT_S)");
  score->add_option("--embed-retries", run.provider.retries, "HTTP retries (default $EMBED_RETRIES)");
  score->add_option("--cache", run.provider.cache_path, "On-disk embedding cache (JSONL)");
  score->add_flag("--no-normalize", no_normalize, "Compare raw text instead of normalized text");
  score->add_option("--workers", run.workers, "Worker threads (0 = all cores)");
  score->add_option("--seed", run.seed, "Seed echoed in the report (scoring itself is deterministic)");
  score->add_flag("--strict", run.strict, "Exit 2 when any transcript is skipped");
  score->add_flag("--percent", run.percent, "Report scores as percentages");
  score->add_option("--config", config_path, "Re-run from the config echoed in a previous report");
  score->add_option("--out", out_path, "Output file (default stdout)");
  score->add_flag("--csv", csv, "Write CSV instead of JSON");

  // align
  std::string corpus_path, laughter_path;
  AlignmentConfig align_cfg;
  bool strict_preceding = false;
  bool align_strict = false;
  auto* align = app.add_subcommand("align", "Derive ground truth from laughter events");
  align->add_option("--corpus", corpus_path, "Corpus JSONL with sentence timings")->required();
  align->add_option("--laughter", laughter_path, "Laughter events JSONL")->required();
  align->add_option("--min-laughter", align_cfg.min_laughter_s, "Minimum laughter length (s)")
      ->check(CLI::NonNegativeNumber);
  align->add_option("--min-probability", align_cfg.min_probability, "Minimum detection probability")
      ->check(CLI::Range(0.0, 1.0));
  align->add_option("--max-lag", align_cfg.max_lag_s, "Maximum delay after a sentence end (s)")
      ->check(CLI::NonNegativeNumber);
  align->add_flag("--strict-preceding", strict_preceding, "Attribute only to sentences that ended before the onset");
  align->add_flag("--strict", align_strict, "Exit 2 when a transcript gets no ground truth");
  align->add_option("--out", out_path, "Output JSONL (default stdout)");

  // agreement
  AgreementConfig agree_cfg;
  bool mean_over_raters = false;
  auto* agreement = app.add_subcommand("agreement", "Percentage agreement among raters and with models");
  agreement->add_option("--labels", agree_cfg.labels_path, "Rater labels JSONL")->required();
  agreement->add_option("--corpus", agree_cfg.corpus_path, "Corpus JSONL")->required();
  agreement->add_option("--predictions", agree_cfg.predictions_path, "Model predictions JSONL");
  agreement->add_option("--threshold", agree_cfg.threshold, "Fuzzy similarity that projects a quote onto a sentence")
      ->check(CLI::Range(0.0, 1.0));
  agreement->add_flag("--mean-over-raters", mean_over_raters, "Human-machine PA as mean over raters");
  agreement->add_flag("--no-normalize", no_normalize, "Compare raw text instead of normalized text");
  agreement->add_flag("--percent", agree_cfg.percent, "Report agreement as percentages");
  agreement->add_option("--out", out_path, "Output file (default stdout)");
  agreement->add_flag("--csv", csv, "Write CSV instead of JSON");

  // self-test
  std::uint64_t seed = 7;
  std::string fixture_dir;
  auto* self_test = app.add_subcommand("self-test", "Run built-in checks on a synthetic corpus");
  self_test->add_option("--seed", seed, "Synthetic fixture seed");
  self_test->add_option("--write-fixture", fixture_dir, "Also write the synthetic fixture to this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*score) {
      if (!config_path.empty()) {
        const bool percent_override = run.percent;
        run = config_from_file(config_path);
        run.percent = run.percent || percent_override;
      } else {
        run.module = module_from_string(module);
        run.columns = columns == "pooled" ? ColumnMode::pooled_quotes : ColumnMode::per_variation;
        if (threshold >= 0.0) run.threshold = threshold;
        if (q > 0) run.q = q;
        if (r > 0) run.r = r;
        run.normalize_inputs = !no_normalize;
      }
      const auto report = cmd_score(run);
      print_warnings(report.warnings);
      for (const auto& s : report.skipped) std::cerr << "skipped " << s.transcript_id << ": " << s.reason << '\n';
      emit(csv ? to_csv(report) : dump_report(to_json(report)), out_path);
      return run.strict && !report.skipped.empty() ? kExitStrictSkip : kExitOk;
    }
    if (*align) {
      if (strict_preceding) align_cfg.rule = AttributionRule::strict_preceding;
      const auto report = cmd_align(corpus_path, laughter_path, align_cfg);
      print_warnings(report.warnings);
      std::ostringstream os;
      write_jsonl(os, report.ground_truth);
      emit(os.str(), out_path);
      bool any_empty = false;
      for (const auto& g : report.ground_truth) any_empty = any_empty || g.empty();
      return align_strict && any_empty ? kExitStrictSkip : kExitOk;
    }
    if (*agreement) {
      agree_cfg.mode = mean_over_raters ? HumanMachineMode::mean_over_raters : HumanMachineMode::majority;
      agree_cfg.normalize_inputs = !no_normalize;
      const auto report = cmd_agreement(agree_cfg);
      print_warnings(report.warnings);
      emit(csv ? to_csv(report) : dump_report(to_json(report)), out_path);
      return kExitOk;
    }
    if (*self_test) return run_self_test(seed, fixture_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
