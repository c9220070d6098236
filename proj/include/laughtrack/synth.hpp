#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "laughtrack/corpus.hpp"

namespace laughtrack {

/// A self-consistent synthetic study: timed transcripts, laughter events
/// (including sub-threshold noise), model predictions in several instruction
/// variations, and rater labels.
struct SyntheticFixture {
  std::vector<Transcript> corpus;
  std::vector<LaughterTrack> laughter;
  std::vector<QuoteSet> predictions;
  std::vector<RaterLabels> labels;
};

struct SyntheticOptions {
  std::uint64_t seed = 7;
  std::size_t transcripts = 6;
  std::size_t raters = 11;
  std::size_t variations = 3;
};

/// Deterministic for a given seed on every platform (no std:: distributions).
SyntheticFixture make_synthetic_fixture(const SyntheticOptions& opts = {});

/// Writes corpus.jsonl, laughter.jsonl, predictions.jsonl and labels.jsonl.
void write_fixture(const SyntheticFixture& f, const std::filesystem::path& dir);

}  // namespace laughtrack
