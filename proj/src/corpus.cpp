#include "laughtrack/corpus.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "laughtrack/error.hpp"
#include "laughtrack/text.hpp"

namespace laughtrack {

using nlohmann::json;

std::string_view to_string(QuoteSource s) {
  switch (s) {
    case QuoteSource::model:
      return "model";
    case QuoteSource::ground_truth:
      return "ground_truth";
    case QuoteSource::human_rater:
      return "human_rater";
  }
  return "model";
}

QuoteSource quote_source_from_string(std::string_view s) {
  if (s == "model") return QuoteSource::model;
  if (s == "ground_truth") return QuoteSource::ground_truth;
  if (s == "human_rater") return QuoteSource::human_rater;
  throw ValidationError("unknown quote source '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// validation

namespace {

std::string fmt_seconds(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

[[noreturn]] void invalid(std::string_view id, const std::string& what) {
  throw ValidationError("transcript '" + std::string(id) + "': " + what);
}

}  // namespace

void validate(const Transcript& t) {
  if (t.id.empty()) throw ValidationError("transcript with empty id");

  const Sentence* prev_timed = nullptr;
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < t.sentences.size(); ++i) {
    const Sentence& s = t.sentences[i];
    const std::string where = "sentences[" + std::to_string(i) + "]";
    if (s.index != i) {
      invalid(t.id, where + ".index is " + std::to_string(s.index) + ", expected " + std::to_string(i));
    }
    if (s.start_s.has_value() != s.end_s.has_value()) {
      invalid(t.id, where + " has only one of start_s/end_s");
    }
    if (s.timed()) {
      if (!std::isfinite(*s.start_s) || !std::isfinite(*s.end_s)) {
        invalid(t.id, where + " has non-finite timings");
      }
      if (*s.start_s < 0.0) invalid(t.id, where + ".start_s is negative");
      if (*s.start_s > *s.end_s) {
        invalid(t.id, where + ".start_s " + fmt_seconds(*s.start_s) + " exceeds end_s " + fmt_seconds(*s.end_s));
      }
      if (prev_timed != nullptr && *s.start_s < *prev_timed->end_s) {
        invalid(t.id, "sentences " + std::to_string(prev_timed->index) + " and " + std::to_string(i) +
                          " overlap: start_s " + fmt_seconds(*s.start_s) + " < previous end_s " +
                          fmt_seconds(*prev_timed->end_s));
      }
      prev_timed = &s;
    }
    const auto at = t.raw_text.find(s.text, cursor);
    if (at == std::string::npos) {
      invalid(t.id, where + ".text does not occur in raw_text after the preceding sentence");
    }
    cursor = at + s.text.size();
  }
}

void validate(const LaughterEvent& e, std::string_view transcript_id) {
  if (!std::isfinite(e.onset_s) || !std::isfinite(e.offset_s) || !std::isfinite(e.probability)) {
    invalid(transcript_id, "laughter event with non-finite field");
  }
  if (!(e.onset_s < e.offset_s)) {
    invalid(transcript_id, "laughter event onset_s " + fmt_seconds(e.onset_s) + " is not before offset_s " +
                               fmt_seconds(e.offset_s));
  }
  if (e.probability < 0.0 || e.probability > 1.0) {
    invalid(transcript_id, "laughter probability " + fmt_seconds(e.probability) + " outside [0,1]");
  }
}

void validate(const RaterLabels& r, const Transcript& t) {
  if (r.labels.size() != t.sentences.size()) {
    invalid(t.id, "rater '" + r.rater_id + "' has " + std::to_string(r.labels.size()) + " labels for " +
                      std::to_string(t.sentences.size()) + " sentences");
  }
}

// ---------------------------------------------------------------------------
// JSON mapping

namespace {

std::optional<double> optional_number(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<double>();
}

std::optional<std::string> optional_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

}  // namespace

json to_json(const Transcript& t) {
  json sentences = json::array();
  for (const auto& s : t.sentences) {
    json js = {{"index", s.index}, {"text", s.text}};
    if (s.start_s) js["start_s"] = *s.start_s;
    if (s.end_s) js["end_s"] = *s.end_s;
    sentences.push_back(std::move(js));
  }
  json j = {{"id", t.id}, {"raw_text", t.raw_text}, {"sentences", std::move(sentences)}};
  if (t.comedian) j["comedian"] = *t.comedian;
  return j;
}

json to_json(const QuoteSet& q) {
  json j = {{"transcript_id", q.transcript_id}, {"source", to_string(q.source)}, {"quotes", q.quotes}};
  if (q.variation_id) j["variation_id"] = *q.variation_id;
  if (q.model) j["model"] = *q.model;
  return j;
}

json to_json(const LaughterTrack& l) {
  json events = json::array();
  for (const auto& e : l.events) {
    events.push_back({{"onset_s", e.onset_s}, {"offset_s", e.offset_s}, {"probability", e.probability}});
  }
  return {{"transcript_id", l.transcript_id}, {"events", std::move(events)}};
}

json to_json(const RaterLabels& r) {
  json labels = json::array();
  for (bool b : r.labels) labels.push_back(b);
  return {{"rater_id", r.rater_id}, {"transcript_id", r.transcript_id}, {"labels", std::move(labels)}};
}

Transcript transcript_from_json(const json& j) {
  Transcript t;
  t.id = j.at("id").get<std::string>();
  t.comedian = optional_string(j, "comedian");
  t.raw_text = j.at("raw_text").get<std::string>();
  for (const auto& js : j.at("sentences")) {
    Sentence s;
    s.index = js.at("index").get<std::size_t>();
    s.text = js.at("text").get<std::string>();
    s.start_s = optional_number(js, "start_s");
    s.end_s = optional_number(js, "end_s");
    t.sentences.push_back(std::move(s));
  }
  return t;
}

QuoteSet quote_set_from_json(const json& j) {
  QuoteSet q;
  q.transcript_id = j.at("transcript_id").get<std::string>();
  q.source = quote_source_from_string(j.value("source", std::string("model")));
  for (const auto& quote : j.at("quotes")) {
    auto text = quote.get<std::string>();
    if (normalize_text(text).empty()) {
      throw ValidationError("transcript '" + q.transcript_id + "': empty quote");
    }
    q.quotes.push_back(std::move(text));
  }
  q.variation_id = optional_string(j, "variation_id");
  q.model = optional_string(j, "model");
  return q;
}

LaughterTrack laughter_from_json(const json& j) {
  LaughterTrack l;
  l.transcript_id = j.at("transcript_id").get<std::string>();
  for (const auto& je : j.at("events")) {
    LaughterEvent e{je.at("onset_s").get<double>(), je.at("offset_s").get<double>(),
                    je.at("probability").get<double>()};
    validate(e, l.transcript_id);
    l.events.push_back(e);
  }
  return l;
}

RaterLabels rater_labels_from_json(const json& j) {
  RaterLabels r;
  r.rater_id = j.at("rater_id").get<std::string>();
  r.transcript_id = j.at("transcript_id").get<std::string>();
  for (const auto& b : j.at("labels")) r.labels.push_back(b.get<bool>());
  return r;
}

// ---------------------------------------------------------------------------
// JSONL files

namespace {

template <typename T, typename Decode>
std::vector<T> parse_jsonl(std::istream& in, const std::string& name, Decode decode) {
  std::vector<T> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(name, line_no, std::string("malformed JSON: ") + e.what());
    }
    try {
      out.push_back(decode(j));
    } catch (const json::exception& e) {
      throw ParseError(name, line_no, std::string("bad record: ") + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError(name + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return in;
}

template <typename T>
void write_lines(std::ostream& out, const std::vector<T>& items) {
  for (const auto& item : items) out << to_json(item).dump() << '\n';
}

}  // namespace

std::vector<Transcript> parse_corpus(std::istream& in, const std::string& name) {
  auto corpus = parse_jsonl<Transcript>(in, name, [](const json& j) {
    auto t = transcript_from_json(j);
    validate(t);
    return t;
  });
  std::unordered_set<std::string> seen;
  for (const auto& t : corpus) {
    if (!seen.insert(t.id).second) throw ValidationError(name + ": duplicate transcript id '" + t.id + "'");
  }
  return corpus;
}

std::vector<Transcript> load_corpus(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_corpus(in, path.string());
}

std::vector<QuoteSet> parse_quote_sets(std::istream& in, const std::string& name) {
  return parse_jsonl<QuoteSet>(in, name, quote_set_from_json);
}

std::vector<QuoteSet> load_quote_sets(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_quote_sets(in, path.string());
}

std::vector<LaughterTrack> parse_laughter(std::istream& in, const std::string& name) {
  return parse_jsonl<LaughterTrack>(in, name, laughter_from_json);
}

std::vector<LaughterTrack> load_laughter(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_laughter(in, path.string());
}

std::vector<RaterLabels> parse_rater_labels(std::istream& in, const std::string& name) {
  return parse_jsonl<RaterLabels>(in, name, rater_labels_from_json);
}

std::vector<RaterLabels> load_rater_labels(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_rater_labels(in, path.string());
}

void write_jsonl(std::ostream& out, const std::vector<Transcript>& corpus) { write_lines(out, corpus); }
void write_jsonl(std::ostream& out, const std::vector<QuoteSet>& sets) { write_lines(out, sets); }
void write_jsonl(std::ostream& out, const std::vector<LaughterTrack>& tracks) { write_lines(out, tracks); }
void write_jsonl(std::ostream& out, const std::vector<RaterLabels>& labels) { write_lines(out, labels); }

// ---------------------------------------------------------------------------
// LLM output parsing

namespace {

std::u32string_view trim(std::u32string_view s) {
  while (!s.empty() && is_whitespace(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_whitespace(s.back())) s.remove_suffix(1);
  return s;
}

bool is_line_break(char32_t c) {
  return c == U'\n' || c == U'\r' || c == U'\v' || c == U'\f' || c == U'\u0085' || c == U'\u2028' ||
         c == U'\u2029';
}

bool is_bullet(char32_t c) { return c == U'-' || c == U'*' || c == U'•'; }

bool is_open_quote(char32_t c) { return c == U'"' || c == U'\'' || c == U'“' || c == U'‘'; }

bool quotes_pair(char32_t open, char32_t close) {
  switch (open) {
    case U'"':
      return close == U'"' || close == U'”';
    case U'\'':
      return close == U'\'' || close == U'’';
    case U'“':
      return close == U'”' || close == U'"';
    case U'‘':
      return close == U'’' || close == U'\'';
    default:
      return false;
  }
}

// Strips one leading list marker, returning true when something was removed.
bool strip_marker(std::u32string_view& s) {
  std::size_t i = 0;
  while (i < s.size() && s[i] >= U'0' && s[i] <= U'9') ++i;
  if (i > 0 && i < s.size() && (s[i] == U'.' || s[i] == U')') &&
      (i + 1 == s.size() || is_whitespace(s[i + 1]))) {
    s = trim(s.substr(i + 1));
    return true;
  }
  if (!s.empty() && is_bullet(s.front()) && (s.size() == 1 || is_whitespace(s[1]))) {
    s = trim(s.substr(1));
    return true;
  }
  return false;
}

}  // namespace

QuoteSet parse_quote_list(std::string_view raw_llm_output, std::string transcript_id) {
  QuoteSet out;
  out.transcript_id = std::move(transcript_id);
  out.source = QuoteSource::model;

  const std::u32string text = decode_utf8(raw_llm_output);
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = begin;
    while (end < text.size() && !is_line_break(text[end])) ++end;
    std::u32string_view line = trim(std::u32string_view(text).substr(begin, end - begin));
    begin = end + 1;

    while (strip_marker(line)) {
    }
    if (line.size() >= 2 && is_open_quote(line.front()) && quotes_pair(line.front(), line.back())) {
      line = trim(line.substr(1, line.size() - 2));
    }
    std::string quote = encode_utf8(line);
    if (!normalize_text(quote).empty()) out.quotes.push_back(std::move(quote));
  }
  return out;
}

}  // namespace laughtrack
