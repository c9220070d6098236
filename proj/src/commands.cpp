#include "laughtrack/commands.hpp"

#include <algorithm>
#include <exception>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "laughtrack/error.hpp"
#include "laughtrack/fuzzy.hpp"
#include "laughtrack/text.hpp"

namespace laughtrack {

using nlohmann::json;

std::string_view to_string(Module m) {
  switch (m) {
    case Module::fuzzy:
      return "fuzzy";
    case Module::embed:
      return "embed";
    case Module::subspace:
      return "subspace";
  }
  return "fuzzy";
}

Module module_from_string(std::string_view s) {
  if (s == "fuzzy") return Module::fuzzy;
  if (s == "embed") return Module::embed;
  if (s == "subspace") return Module::subspace;
  throw ContractError("unknown module '" + std::string(s) + "' (expected fuzzy, embed or subspace)");
}

namespace {

std::string_view to_string(ColumnMode c) { return c == ColumnMode::pooled_quotes ? "pooled" : "per-variation"; }

ColumnMode column_mode_from_string(std::string_view s) {
  if (s == "pooled") return ColumnMode::pooled_quotes;
  if (s == "per-variation") return ColumnMode::per_variation;
  throw ContractError("unknown column mode '" + std::string(s) + "' (expected pooled or per-variation)");
}

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw ContractError(std::string(what) + " path is required");
  if (!std::filesystem::exists(path)) throw ContractError(std::string(what) + " '" + path + "' does not exist");
}

json optional_to_json(const std::optional<std::size_t>& v) { return v ? json(*v) : json(nullptr); }

std::optional<std::size_t> optional_size(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<std::size_t>();
}

double display(double score, bool percent) { return percent ? score * 100.0 : score; }

}  // namespace

// ---------------------------------------------------------------------------
// providers and configuration

std::unique_ptr<EmbeddingProvider> make_provider(const ProviderSettings& s) {
  std::unique_ptr<EmbeddingProvider> p;
  if (s.kind == "hash") {
    p = std::make_unique<HashingEmbedder>(s.dimension);
  } else if (s.kind == "precomputed") {
    require_file(s.vectors_path, "embedding vectors file");
    p = std::make_unique<PrecomputedEmbedder>(s.vectors_path);
  } else if (s.kind == "http" || s.kind == "openai") {
    auto cfg = HttpProviderConfig::from_env();
    if (!s.base_url.empty()) cfg.base_url = s.base_url;
    cfg.model = s.model;
    cfg.timeout_s = s.timeout_s;
    cfg.retries = s.retries;
    cfg.protocol = s.kind == "http" ? HttpProtocol::native : HttpProtocol::openai;
    p = std::make_unique<HttpEmbedder>(cfg);
  } else {
    throw ContractError("unknown embedding provider '" + s.kind + "' (expected hash, precomputed, http or openai)");
  }
  if (!s.cache_path.empty()) p->set_cache(std::make_shared<EmbeddingCache>(s.cache_path));
  return p;
}

void RunConfig::validate() const {
  if (!(alpha >= 0.0)) throw ContractError("alpha must be non-negative");
  if (threshold && !(*threshold >= 0.0 && *threshold <= 1.0)) throw ContractError("threshold must lie in [0, 1]");
  if (q && *q == 0) throw ContractError("q must be >= 1");
  if (r && *r == 0) throw ContractError("r must be >= 1");
  require_file(ground_truth_path, "ground truth");
  require_file(predictions_path, "predictions");
  if (!corpus_path.empty()) require_file(corpus_path, "corpus");
  if (module != Module::fuzzy && provider.kind == "precomputed") require_file(provider.vectors_path, "vectors");
}

json to_json(const RunConfig& c) {
  json provider = {{"kind", c.provider.kind},         {"dimension", c.provider.dimension},
                   {"vectors", c.provider.vectors_path}, {"base_url", c.provider.base_url},
                   {"model", c.provider.model},       {"timeout_s", c.provider.timeout_s},
                   {"retries", c.provider.retries},   {"cache", c.provider.cache_path}};
  return {{"module", to_string(c.module)},
          {"alpha", c.alpha},
          {"threshold", c.threshold ? json(*c.threshold) : json(nullptr)},
          {"normalize_inputs", c.normalize_inputs},
          {"provider", std::move(provider)},
          {"q", optional_to_json(c.q)},
          {"r", optional_to_json(c.r)},
          {"centered", c.centered},
          {"columns", to_string(c.columns)},
          {"corpus", c.corpus_path},
          {"ground_truth", c.ground_truth_path},
          {"predictions", c.predictions_path},
          {"strict", c.strict},
          {"percent", c.percent},
          {"seed", c.seed},
          {"workers", c.workers}};
}

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  c.module = module_from_string(j.at("module").get<std::string>());
  c.alpha = j.at("alpha").get<double>();
  if (!j.at("threshold").is_null()) c.threshold = j.at("threshold").get<double>();
  c.normalize_inputs = j.at("normalize_inputs").get<bool>();
  const auto& p = j.at("provider");
  c.provider.kind = p.at("kind").get<std::string>();
  c.provider.dimension = p.at("dimension").get<std::size_t>();
  c.provider.vectors_path = p.at("vectors").get<std::string>();
  c.provider.base_url = p.at("base_url").get<std::string>();
  c.provider.model = p.at("model").get<std::string>();
  c.provider.timeout_s = p.at("timeout_s").get<double>();
  c.provider.retries = p.at("retries").get<int>();
  c.provider.cache_path = p.at("cache").get<std::string>();
  c.q = optional_size(j, "q");
  c.r = optional_size(j, "r");
  c.centered = j.at("centered").get<bool>();
  c.columns = column_mode_from_string(j.at("columns").get<std::string>());
  c.corpus_path = j.at("corpus").get<std::string>();
  c.ground_truth_path = j.at("ground_truth").get<std::string>();
  c.predictions_path = j.at("predictions").get<std::string>();
  c.strict = j.at("strict").get<bool>();
  c.percent = j.at("percent").get<bool>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.workers = j.at("workers").get<std::size_t>();
  return c;
}

// ---------------------------------------------------------------------------
// score

namespace {

struct Work {
  std::string transcript_id;
  QuoteSet truth;
  std::vector<QuoteSet> variations;
};

// Lines sharing a variation_id are merged; lines without one stand alone.
std::vector<QuoteSet> group_variations(const std::vector<const QuoteSet*>& lines) {
  std::vector<QuoteSet> out;
  std::map<std::string, std::size_t> by_id;
  std::size_t anonymous = 0;
  for (const QuoteSet* q : lines) {
    if (q->variation_id) {
      auto [it, inserted] = by_id.try_emplace(*q->variation_id, out.size());
      if (!inserted) {
        auto& merged = out[it->second].quotes;
        merged.insert(merged.end(), q->quotes.begin(), q->quotes.end());
        continue;
      }
      out.push_back(*q);
    } else {
      out.push_back(*q);
      out.back().variation_id = "#" + std::to_string(++anonymous);
    }
  }
  return out;
}

TranscriptScore score_pairwise(const Work& w, const RunConfig& cfg, EmbeddingProvider* provider) {
  TranscriptScore ts;
  ts.transcript_id = w.transcript_id;
  ts.k = w.truth.size();

  std::vector<QuoteSet> variations = w.variations;
  if (variations.empty()) variations.push_back(QuoteSet{w.transcript_id, QuoteSource::model, {}, std::nullopt, {}});

  const ScoringOptions opts{cfg.alpha, cfg.threshold};
  double sum = 0.0;
  for (const auto& v : variations) {
    MatchResult m;
    if (cfg.module == Module::fuzzy) {
      m = score_fuzzy(v, w.truth, FuzzyConfig{cfg.normalize_inputs, cfg.alpha}, cfg.threshold);
    } else {
      m = score_embedding(v, w.truth, *provider, EmbeddingScoringOptions{opts, cfg.normalize_inputs});
    }
    sum += m.final_score;
    ts.n += v.size();
    ts.penalty += m.penalty_count;
    ts.variations.push_back({v.variation_id.value_or(""), m.final_score, v.size(), w.truth.size(), m.penalty_count});
  }
  ts.score = sum / static_cast<double>(variations.size());
  if (ts.variations.size() == 1) ts.variations.clear();
  return ts;
}

TranscriptScore score_subspace(const Work& w, const RunConfig& cfg, EmbeddingProvider& provider) {
  SubspaceConfig sc;
  sc.q = cfg.q;
  sc.r = cfg.r;
  sc.centered = cfg.centered;
  sc.columns = cfg.columns;
  sc.normalize_inputs = cfg.normalize_inputs;
  auto result = score_subspace_module(w.variations, w.truth, provider, sc);

  TranscriptScore ts;
  ts.transcript_id = w.transcript_id;
  ts.score = result.score;
  for (const auto& v : w.variations) ts.n += v.size();
  ts.k = w.truth.size();
  ts.subspace = std::move(result);
  return ts;
}

void prewarm(EmbeddingProvider& provider, const std::vector<Work>& work, bool normalize) {
  std::set<std::string> texts;
  auto add = [&](const std::string& s) { texts.insert(normalize ? normalize_text(s) : s); };
  for (const auto& w : work) {
    for (const auto& q : w.truth.quotes) add(q);
    for (const auto& v : w.variations) {
      for (const auto& q : v.quotes) add(q);
    }
  }
  texts.erase(std::string());
  const std::vector<std::string> batch(texts.begin(), texts.end());
  if (!batch.empty()) provider.embed(batch);
}

}  // namespace

ScoreReport score_corpus(const RunConfig& cfg, const std::vector<QuoteSet>& ground_truth,
                         const std::vector<QuoteSet>& predictions, const std::vector<Transcript>* corpus,
                         EmbeddingProvider* provider) {
  ScoreReport report;
  report.config = cfg;
  if (cfg.module != Module::fuzzy && provider == nullptr) {
    throw ContractError("the embed and subspace modules need an embedding provider");
  }

  std::map<std::string, QuoteSet> truth_by_id;
  for (const auto& g : ground_truth) {
    auto [it, inserted] = truth_by_id.try_emplace(g.transcript_id, g);
    if (!inserted) it->second.quotes.insert(it->second.quotes.end(), g.quotes.begin(), g.quotes.end());
  }
  std::map<std::string, std::vector<const QuoteSet*>> predictions_by_id;
  std::set<std::string> model_names;
  for (const auto& p : predictions) {
    predictions_by_id[p.transcript_id].push_back(&p);
    if (p.model) model_names.insert(*p.model);
  }
  if (model_names.size() > 1) {
    report.warnings.push_back("predictions mix " + std::to_string(model_names.size()) +
                              " model names; all lines of a transcript are scored together");
  }

  std::set<std::string> corpus_ids;
  if (corpus != nullptr) {
    for (const auto& t : *corpus) corpus_ids.insert(t.id);
  }

  std::vector<Work> work;
  for (auto& [id, truth] : truth_by_id) {
    if (corpus != nullptr && !corpus_ids.count(id)) {
      report.warnings.push_back("ground truth for unknown transcript '" + id + "'");
      report.skipped.push_back({id, "transcript not in corpus"});
      continue;
    }
    if (truth.empty()) {
      report.skipped.push_back({id, "no ground-truth quotes (k = 0)"});
      continue;
    }
    Work w{id, truth, {}};
    if (auto it = predictions_by_id.find(id); it != predictions_by_id.end()) w.variations = group_variations(it->second);
    if (cfg.module == Module::subspace && w.variations.size() < 2) {
      report.skipped.push_back({id, "subspace scoring needs at least 2 instruction variations, found " +
                                        std::to_string(w.variations.size())});
      continue;
    }
    work.push_back(std::move(w));
  }
  for (const auto& [id, lines] : predictions_by_id) {
    if (!truth_by_id.count(id)) {
      report.warnings.push_back("predictions for transcript '" + id + "' without ground truth");
      report.skipped.push_back({id, "no ground truth"});
    }
  }
  for (const auto& id : corpus_ids) {
    if (!truth_by_id.count(id) && !predictions_by_id.count(id)) report.skipped.push_back({id, "no ground truth"});
  }

  if (cfg.module != Module::fuzzy) prewarm(*provider, work, cfg.normalize_inputs);

  std::vector<std::optional<TranscriptScore>> scored(work.size());
  std::vector<std::string> skip_reason(work.size());
  std::exception_ptr failure;
  const auto count = static_cast<std::ptrdiff_t>(work.size());
  int threads = static_cast<int>(cfg.workers);
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto& w = work[static_cast<std::size_t>(i)];
    try {
      scored[static_cast<std::size_t>(i)] =
          cfg.module == Module::subspace ? score_subspace(w, cfg, *provider) : score_pairwise(w, cfg, provider);
    } catch (const UndefinedScoreError& e) {
      skip_reason[static_cast<std::size_t>(i)] = e.what();
    } catch (const DegenerateInputError& e) {
      skip_reason[static_cast<std::size_t>(i)] = e.what();
    } catch (...) {
#pragma omp critical(laughtrack_score_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  double sum = 0.0;
  for (std::size_t i = 0; i < work.size(); ++i) {
    if (scored[i]) {
      sum += scored[i]->score;
      report.per_transcript.push_back(std::move(*scored[i]));
    } else {
      report.skipped.push_back({work[i].transcript_id, skip_reason[i]});
    }
  }
  if (!report.per_transcript.empty()) sum /= static_cast<double>(report.per_transcript.size());
  if (!report.per_transcript.empty()) report.aggregate = sum;

  std::sort(report.skipped.begin(), report.skipped.end(),
            [](const auto& a, const auto& b) { return a.transcript_id < b.transcript_id; });
  return report;
}

ScoreReport cmd_score(const RunConfig& cfg) {
  cfg.validate();
  const auto truth = load_quote_sets(cfg.ground_truth_path);
  const auto predictions = load_quote_sets(cfg.predictions_path);
  std::optional<std::vector<Transcript>> corpus;
  if (!cfg.corpus_path.empty()) corpus = load_corpus(cfg.corpus_path);
  std::unique_ptr<EmbeddingProvider> provider;
  if (cfg.module != Module::fuzzy) provider = make_provider(cfg.provider);
  return score_corpus(cfg, truth, predictions, corpus ? &*corpus : nullptr, provider.get());
}

json to_json(const ScoreReport& r) {
  const bool pct = r.config.percent;
  json rows = json::array();
  for (const auto& t : r.per_transcript) {
    json row = {{"transcript_id", t.transcript_id}, {"score", display(t.score, pct)}, {"n", t.n},
                {"k", t.k},                         {"penalty", t.penalty}};
    if (!t.variations.empty()) {
      json vs = json::array();
      for (const auto& v : t.variations) {
        vs.push_back({{"variation_id", v.variation_id},
                      {"score", display(v.score, pct)},
                      {"n", v.n},
                      {"k", v.k},
                      {"penalty", v.penalty}});
      }
      row["variations"] = std::move(vs);
    }
    if (t.subspace) {
      row["subspace"] = {{"q_model", t.subspace->q_model},
                         {"q_truth", t.subspace->q_truth},
                         {"r", t.subspace->r},
                         {"model_columns", t.subspace->model_columns},
                         {"truth_columns", t.subspace->truth_columns},
                         {"cosines", t.subspace->cosines}};
    }
    rows.push_back(std::move(row));
  }
  json skipped = json::array();
  for (const auto& s : r.skipped) skipped.push_back({{"transcript_id", s.transcript_id}, {"reason", s.reason}});
  return {{"tool_version", r.tool_version},
          {"module", to_string(r.config.module)},
          {"units", pct ? "percent" : "fraction"},
          {"aggregate", r.aggregate ? json(display(*r.aggregate, pct)) : json(nullptr)},
          {"scored", r.per_transcript.size()},
          {"per_transcript", std::move(rows)},
          {"skipped", std::move(skipped)},
          {"warnings", r.warnings},
          {"config", to_json(r.config)}};
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string to_csv(const ScoreReport& r) {
  const bool pct = r.config.percent;
  std::ostringstream os;
  os << "transcript_id,score,n,k,penalty\n";
  for (const auto& t : r.per_transcript) {
    os << csv_field(t.transcript_id) << ',' << number(display(t.score, pct)) << ',' << t.n << ',' << t.k << ','
       << t.penalty << '\n';
  }
  if (r.aggregate) os << "aggregate," << number(display(*r.aggregate, pct)) << ",,,\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// align

AlignReport align_corpus(const std::vector<Transcript>& corpus, const std::vector<LaughterTrack>& laughter,
                         const AlignmentConfig& cfg) {
  cfg.validate();
  AlignReport report;
  std::map<std::string, std::vector<LaughterEvent>> events_by_id;
  for (const auto& track : laughter) {
    auto& events = events_by_id[track.transcript_id];
    events.insert(events.end(), track.events.begin(), track.events.end());
  }
  std::set<std::string> corpus_ids;
  for (const auto& t : corpus) {
    corpus_ids.insert(t.id);
    const auto it = events_by_id.find(t.id);
    if (it == events_by_id.end()) {
      report.warnings.push_back("no laughter events for transcript '" + t.id + "'");
      report.ground_truth.push_back(QuoteSet{t.id, QuoteSource::ground_truth, {}, std::nullopt, {}});
      continue;
    }
    const auto kept = filter_laughter(it->second, cfg);
    report.events_total += it->second.size();
    report.events_kept += kept.size();
    auto result = align_ground_truth(t, kept, cfg);
    report.events_unattributed += result.unattributed.size();
    for (const auto& e : result.unattributed) {
      std::ostringstream os;
      os << "transcript '" << t.id << "': laughter at " << e.onset_s << " s matches no sentence";
      report.warnings.push_back(os.str());
    }
    if (result.ground_truth.empty()) {
      report.warnings.push_back("transcript '" + t.id + "' has an empty ground truth after filtering");
    }
    report.ground_truth.push_back(std::move(result.ground_truth));
  }
  for (const auto& [id, events] : events_by_id) {
    if (!corpus_ids.count(id)) report.warnings.push_back("laughter for unknown transcript '" + id + "'");
  }
  return report;
}

AlignReport cmd_align(const std::string& corpus_path, const std::string& laughter_path, const AlignmentConfig& cfg) {
  require_file(corpus_path, "corpus");
  require_file(laughter_path, "laughter");
  return align_corpus(load_corpus(corpus_path), load_laughter(laughter_path), cfg);
}

// ---------------------------------------------------------------------------
// agreement

json to_json(const AgreementConfig& c) {
  return {{"labels", c.labels_path},
          {"predictions", c.predictions_path},
          {"corpus", c.corpus_path},
          {"threshold", c.threshold},
          {"human_machine", c.mode == HumanMachineMode::majority ? "majority" : "mean-over-raters"},
          {"group_aggregation", "mean-over-pairs"},
          {"normalize_inputs", c.normalize_inputs},
          {"percent", c.percent}};
}

AgreementReport agreement_for(const AgreementConfig& cfg, const std::vector<Transcript>& corpus,
                              const std::vector<RaterLabels>& labels, const std::vector<QuoteSet>& predictions) {
  AgreementReport report;
  report.config = cfg;

  std::set<std::string> corpus_ids;
  for (const auto& t : corpus) corpus_ids.insert(t.id);
  for (const auto& l : labels) {
    if (!corpus_ids.count(l.transcript_id)) {
      report.warnings.push_back("labels for unknown transcript '" + l.transcript_id + "'");
    }
  }

  // model name -> transcript -> pooled quotes
  std::map<std::string, std::map<std::string, QuoteSet>> by_model;
  for (const auto& p : predictions) {
    auto& slot = by_model[p.model.value_or("model")][p.transcript_id];
    slot.transcript_id = p.transcript_id;
    slot.quotes.insert(slot.quotes.end(), p.quotes.begin(), p.quotes.end());
  }

  std::map<std::string, std::pair<double, std::size_t>> hm_sums;
  double group_sum = 0.0;
  std::size_t group_count = 0;
  const FuzzyConfig fuzzy{cfg.normalize_inputs, 0.1};

  for (const auto& t : corpus) {
    const auto m = label_matrix_for(t, labels);
    if (m.raters() == 0) {
      report.warnings.push_back("no rater labels for transcript '" + t.id + "'");
      continue;
    }
    TranscriptAgreement ta;
    ta.transcript_id = t.id;
    ta.sentences = t.sentences.size();
    ta.raters = m.raters();
    if (t.sentences.empty()) {
      report.warnings.push_back("transcript '" + t.id + "' has no sentences");
      report.per_transcript.push_back(std::move(ta));
      continue;
    }
    if (m.raters() >= 2) {
      ta.group_pa = group_pa(m);
      group_sum += *ta.group_pa;
      ++group_count;
      for (std::size_t a = 0; a < m.raters(); ++a) {
        for (std::size_t b = a + 1; b < m.raters(); ++b) {
          ta.pairs.push_back({m.ids[a], m.ids[b], pairwise_pa(m.rows[a], m.rows[b])});
        }
      }
    }
    const auto majority = majority_labels(m);
    ta.majority_positive = static_cast<std::size_t>(std::count(majority.begin(), majority.end(), true));

    for (const auto& [model, per_transcript] : by_model) {
      const auto it = per_transcript.find(t.id);
      if (it == per_transcript.end()) continue;
      const auto projected = model_labels_from_quotes(it->second, t, cfg.threshold, fuzzy);
      const double pa = human_machine_pa(m, projected, cfg.mode);
      ta.human_machine.emplace_back(model, pa);
      auto& acc = hm_sums[model];
      acc.first += pa;
      ++acc.second;
    }
    report.per_transcript.push_back(std::move(ta));
  }

  if (group_count > 0) report.mean_group_pa = group_sum / static_cast<double>(group_count);
  for (const auto& [model, acc] : hm_sums) {
    report.mean_human_machine.emplace_back(model, acc.first / static_cast<double>(acc.second));
  }
  return report;
}

AgreementReport cmd_agreement(const AgreementConfig& cfg) {
  require_file(cfg.labels_path, "rater labels");
  require_file(cfg.corpus_path, "corpus");
  if (!(cfg.threshold > 0.0 && cfg.threshold <= 1.0)) throw ContractError("threshold must lie in (0, 1]");
  std::vector<QuoteSet> predictions;
  if (!cfg.predictions_path.empty()) {
    require_file(cfg.predictions_path, "predictions");
    predictions = load_quote_sets(cfg.predictions_path);
  }
  return agreement_for(cfg, load_corpus(cfg.corpus_path), load_rater_labels(cfg.labels_path), predictions);
}

json to_json(const AgreementReport& r) {
  const bool pct = r.config.percent;
  json rows = json::array();
  for (const auto& t : r.per_transcript) {
    json pairs = json::array();
    for (const auto& p : t.pairs) pairs.push_back({{"a", p.a}, {"b", p.b}, {"pa", display(p.pa, pct)}});
    json hm = json::object();
    for (const auto& [model, pa] : t.human_machine) hm[model] = display(pa, pct);
    rows.push_back({{"transcript_id", t.transcript_id},
                    {"sentences", t.sentences},
                    {"raters", t.raters},
                    {"group_pa", t.group_pa ? json(display(*t.group_pa, pct)) : json(nullptr)},
                    {"pairs", std::move(pairs)},
                    {"majority_positive", t.majority_positive},
                    {"human_machine", std::move(hm)}});
  }
  json hm = json::object();
  for (const auto& [model, pa] : r.mean_human_machine) hm[model] = display(pa, pct);
  return {{"tool_version", r.tool_version},
          {"units", pct ? "percent" : "fraction"},
          {"per_transcript", std::move(rows)},
          {"aggregate",
           {{"group_pa", r.mean_group_pa ? json(display(*r.mean_group_pa, pct)) : json(nullptr)},
            {"human_machine", std::move(hm)}}},
          {"warnings", r.warnings},
          {"config", to_json(r.config)}};
}

std::string to_csv(const AgreementReport& r) {
  const bool pct = r.config.percent;
  std::vector<std::string> models;
  for (const auto& [model, pa] : r.mean_human_machine) models.push_back(model);

  std::ostringstream os;
  os << "transcript_id,raters,group_pa";
  for (const auto& m : models) os << ',' << csv_field("pa_" + m);
  os << '\n';
  for (const auto& t : r.per_transcript) {
    os << csv_field(t.transcript_id) << ',' << t.raters << ',';
    if (t.group_pa) os << number(display(*t.group_pa, pct));
    for (const auto& m : models) {
      os << ',';
      for (const auto& [name, pa] : t.human_machine) {
        if (name == m) os << number(display(pa, pct));
      }
    }
    os << '\n';
  }
  os << "average,,";
  if (r.mean_group_pa) os << number(display(*r.mean_group_pa, pct));
  for (const auto& [model, pa] : r.mean_human_machine) os << ',' << number(display(pa, pct));
  os << '\n';
  return os.str();
}

std::string dump_report(const json& j) { return j.dump(2) + "\n"; }

}  // namespace laughtrack
