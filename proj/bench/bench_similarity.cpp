// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "laughtrack/commands.hpp"
#include "laughtrack/fuzzy.hpp"
#include "laughtrack/synth.hpp"

using namespace laughtrack;

namespace {

QuoteSet quotes(std::size_t n, std::uint64_t seed) {
  static const char* words[] = {"my", "dog", "judges", "me", "taxes", "are", "a", "prank", "mornings", "why"};
  QuoteSet q{"bench", QuoteSource::model, {}, {}, {}};
  std::uint64_t s = seed;
  for (std::size_t i = 0; i < n; ++i) {
    std::string line;
    for (int w = 0; w < 12; ++w) {
      s = s * 6364136223846793005ULL + 1442695040888963407ULL;
      if (w) line += ' ';
      line += words[(s >> 33) % 10];
    }
    q.quotes.push_back(line);
  }
  return q;
}

void BM_FuzzyMatrixSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = quotes(n, 1), g = quotes(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(fuzzy_similarity_matrix_serial(m, g));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

void BM_FuzzyMatrixParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = quotes(n, 1), g = quotes(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(fuzzy_similarity_matrix(m, g));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

void BM_ScoreCorpus(benchmark::State& state) {
  SyntheticOptions opts;
  opts.transcripts = 24;
  const auto f = make_synthetic_fixture(opts);
  std::vector<QuoteSet> truth;
  for (const auto& t : f.corpus) {
    QuoteSet q{t.id, QuoteSource::ground_truth, {}, {}, {}};
    for (std::size_t i = 0; i < t.sentences.size(); i += 3) q.quotes.push_back(t.sentences[i].text);
    truth.push_back(q);
  }
  RunConfig cfg;
  cfg.workers = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(score_corpus(cfg, truth, f.predictions, &f.corpus, nullptr));
}

}  // namespace

BENCHMARK(BM_FuzzyMatrixSerial)->Arg(16)->Arg(64)->Arg(128);
BENCHMARK(BM_FuzzyMatrixParallel)->Arg(16)->Arg(64)->Arg(128);
BENCHMARK(BM_ScoreCorpus)->Arg(1)->Arg(0)->ArgName("workers");
BENCHMARK_MAIN();
