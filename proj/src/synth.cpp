#include "laughtrack/synth.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <random>
#include <set>
#include <string>

#include "laughtrack/error.hpp"

namespace laughtrack {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  bool chance(double p) { return uniform() < p; }
  template <typename T, std::size_t N>
  const T& pick(const std::array<T, N>& items) {
    return items[pick(N)];
  }

 private:
  std::mt19937_64 engine_;
};

constexpr std::array<const char*, 10> kPeople = {"My mother", "My landlord", "My dentist", "My neighbor",
                                                 "My boss",   "My cat",      "My uncle",   "My therapist",
                                                 "My barber", "My roommate"};
constexpr std::array<const char*, 10> kPlaces = {"at the airport", "in the gym",    "at a wedding",  "on the bus",
                                                 "at the DMV",     "in the kitchen", "at the bank",  "on a date",
                                                 "at the dentist", "in a group chat"};
constexpr std::array<const char*, 8> kSetupVerbs = {"told me", "asked me", "warned me", "reminded me",
                                                     "texted me", "promised me", "explained to me", "emailed me"};
constexpr std::array<const char*, 8> kTopics = {"to eat more vegetables", "to save money", "to be on time",
                                                "to try yoga",            "to stop ordering takeout",
                                                "to call more often",     "to drink more water",
                                                "to get more sleep"};
constexpr std::array<const char*, 10> kPunchObjects = {"my smoke detector", "a parking meter", "the microwave",
                                                       "my houseplant",     "a vending machine", "my GPS",
                                                       "the toaster",       "my fitness tracker",
                                                       "a self-checkout",   "my voicemail"};
constexpr std::array<const char*, 8> kPunchTails = {
    "judges me harder than my family does",   "has a better social life than I do",
    "gave up on me before I did",             "is the only one who listens to me",
    "filed a complaint about me",             "knows my secrets and keeps them",
    "started charging me rent",               "sends me passive aggressive beeps at night"};
constexpr std::array<const char*, 6> kExplanations = {
    "This is funny because the punchline subverts the setup.",
    "The humor comes from the unexpected comparison.",
    "Here is why it is funny: the comedian exaggerates an everyday problem.",
    "The joke works because the object is treated like a person.",
    "This line lands because of the surprising twist at the end.",
    "The audience laughs at the self-deprecating turn."};

std::string setup_line(Rng& rng) {
  return std::string(rng.pick(kPeople)) + " " + rng.pick(kSetupVerbs) + " " + rng.pick(kTopics) + " " +
         rng.pick(kPlaces) + ".";
}

std::string punch_line(Rng& rng) {
  return std::string("Now ") + rng.pick(kPunchObjects) + " " + rng.pick(kPunchTails) + ".";
}

std::string typo(const std::string& s, Rng& rng) {
  std::string out = s;
  // drop one character and swap two neighbours, away from the ends
  if (out.size() > 6) out.erase(1 + rng.pick(out.size() - 3), 1);
  if (out.size() > 6) {
    const std::size_t i = 1 + rng.pick(out.size() - 4);
    std::swap(out[i], out[i + 1]);
  }
  return out;
}

std::string shouted(const std::string& s) {
  std::string out;
  for (char c : s) out.push_back(c >= 'a' && c <= 'z' ? static_cast<char>(c - 'a' + 'A') : c);
  if (!out.empty() && out.back() == '.') out.back() = '!';
  return out;
}

// seconds on a 1/20 s grid
double grid(double seconds) { return static_cast<double>(static_cast<long long>(seconds * 20.0 + 0.5)) / 20.0; }

}  // namespace

SyntheticFixture make_synthetic_fixture(const SyntheticOptions& opts) {
  if (opts.raters == 0 || opts.variations == 0) throw ContractError("synthetic fixture needs raters and variations");
  Rng rng(opts.seed);
  SyntheticFixture f;

  for (std::size_t t = 0; t < opts.transcripts; ++t) {
    Transcript tr;
    tr.id = "synth-" + std::to_string(t + 1);
    tr.comedian = "Comic " + std::string(1, static_cast<char>('A' + t % 26));

    const std::size_t sentence_count = 12 + rng.pick(7);
    std::set<std::string> used;
    std::vector<bool> funny;
    LaughterTrack track{tr.id, {}};
    double clock = grid(rng.uniform(0.5, 2.0));

    for (std::size_t i = 0; i < sentence_count; ++i) {
      const bool is_punch = i > 0 && !funny.back() && rng.chance(0.45);
      std::string text;
      for (int attempt = 0; attempt < 32; ++attempt) {
        text = is_punch ? punch_line(rng) : setup_line(rng);
        if (!used.count(text)) break;
      }
      if (used.count(text)) text += " Again.";
      used.insert(text);

      const double words = static_cast<double>(std::count(text.begin(), text.end(), ' ') + 1);
      const double start = clock;
      const double end = grid(start + words * 0.32);
      Sentence s{i, text, start, end};
      tr.sentences.push_back(s);
      funny.push_back(is_punch);

      double gap = grid(rng.uniform(0.2, 0.6));
      if (is_punch) {
        gap = grid(rng.uniform(1.2, 2.2));
        double onset = rng.chance(0.25) ? grid(end - 0.3) : grid(end + rng.uniform(0.05, gap - 0.2));
        if (onset <= start) onset = end;
        const double duration = grid(rng.uniform(0.5, 2.5));
        track.events.push_back({onset, grid(onset + duration), grid(rng.uniform(0.6, 0.98))});
      } else if (rng.chance(0.15)) {
        // noise the default filters reject: too short or too unsure
        const double onset = grid(end + 0.05);
        if (rng.chance(0.5)) {
          track.events.push_back({onset, onset + 0.1, 0.9});
        } else {
          track.events.push_back({onset, grid(onset + 1.0), 0.3});
        }
      }
      clock = grid(end + gap);
    }
    // applause long after the set: beyond the lag cap
    track.events.push_back({grid(clock + 20.0), grid(clock + 21.0), 0.9});

    for (std::size_t i = 0; i < tr.sentences.size(); ++i) {
      if (i > 0) tr.raw_text += ' ';
      tr.raw_text += tr.sentences[i].text;
    }

    for (std::size_t v = 0; v < opts.variations; ++v) {
      QuoteSet q;
      q.transcript_id = tr.id;
      q.source = QuoteSource::model;
      q.variation_id = "v" + std::to_string(v + 1);
      q.model = "synthetic-llm";
      for (std::size_t i = 0; i < tr.sentences.size(); ++i) {
        if (!funny[i] || !rng.chance(0.7)) continue;
        const double style = rng.uniform();
        const auto& text = tr.sentences[i].text;
        q.quotes.push_back(style < 0.5 ? text : style < 0.75 ? typo(text, rng) : shouted(text));
      }
      if (rng.chance(0.6)) q.quotes.push_back(tr.sentences[rng.pick(tr.sentences.size())].text);
      if (rng.chance(0.5)) q.quotes.push_back(rng.pick(kExplanations));
      if (q.quotes.empty()) q.quotes.push_back(tr.sentences.back().text);
      f.predictions.push_back(std::move(q));
    }

    for (std::size_t r = 0; r < opts.raters; ++r) {
      RaterLabels labels{"rater-" + std::to_string(r + 1), tr.id, {}};
      for (bool is_funny : funny) labels.labels.push_back(rng.chance(0.08) ? !is_funny : is_funny);
      f.labels.push_back(std::move(labels));
    }

    f.laughter.push_back(std::move(track));
    f.corpus.push_back(std::move(tr));
  }
  return f;
}

void write_fixture(const SyntheticFixture& f, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const char* name, const auto& items) {
    std::ofstream out(dir / name);
    if (!out) throw Error("cannot write '" + (dir / name).string() + "'");
    write_jsonl(out, items);
  };
  write("corpus.jsonl", f.corpus);
  write("laughter.jsonl", f.laughter);
  write("predictions.jsonl", f.predictions);
  write("labels.jsonl", f.labels);
}

}  // namespace laughtrack
