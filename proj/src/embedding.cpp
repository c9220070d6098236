#include "laughtrack/embedding.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <thread>
#include <unordered_set>

#include "httplib.h"
#include "json.hpp"
#include "laughtrack/error.hpp"
#include "laughtrack/text.hpp"

namespace laughtrack {

using nlohmann::json;

EmbeddingVector EmbeddingVector::normalized(std::vector<double> raw) {
  double sq = 0.0;
  for (double v : raw) {
    if (!std::isfinite(v)) throw DegenerateInputError("embedding has a non-finite entry");
    sq += v * v;
  }
  if (raw.empty() || sq == 0.0) throw DegenerateInputError("embedding is empty or all zero");
  const double norm = std::sqrt(sq);
  for (double& v : raw) v /= norm;
  return EmbeddingVector(std::move(raw));
}

EmbeddingVector EmbeddingVector::restored(std::vector<double> unit) {
  double sq = 0.0;
  for (double v : unit) sq += v * v;
  if (std::isfinite(sq) && std::abs(sq - 1.0) <= 1e-9) return EmbeddingVector(std::move(unit));
  return normalized(std::move(unit));
}

double embed_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dimension() != b.dimension()) {
    throw ContractError("embedding dimension mismatch: " + std::to_string(a.dimension()) + " vs " +
                        std::to_string(b.dimension()));
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) dot += a[i] * b[i];
  return std::clamp(dot, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// feature hashing

HashedToken hash_token(std::string_view token, std::size_t d) {
  const std::uint64_t h = fnv1a64(token);
  return {static_cast<std::size_t>(h % d), (h >> 63) != 0 ? -1 : 1};
}

EmbeddingVector deterministic_test_embedder(std::string_view text, std::size_t d) {
  if (d < 8) throw ContractError("hashing embedder needs d >= 8, got " + std::to_string(d));
  std::vector<double> counts(d, 0.0);
  const std::string norm = normalize_text(text);
  std::size_t begin = 0;
  while (begin < norm.size()) {
    auto end = norm.find(' ', begin);
    if (end == std::string::npos) end = norm.size();
    const auto [bucket, sign] = hash_token(std::string_view(norm).substr(begin, end - begin), d);
    counts[bucket] += sign;
    begin = end + 1;
  }
  if (std::all_of(counts.begin(), counts.end(), [](double c) { return c == 0.0; })) counts[0] = 1.0;
  return EmbeddingVector::normalized(std::move(counts));
}

// ---------------------------------------------------------------------------
// cache

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string EmbeddingCache::key(const std::string& provider, const std::string& model, const std::string& text) {
  return provider + '\x1f' + model + '\x1f' + hex64(fnv1a64(text));
}

EmbeddingCache::EmbeddingCache(std::filesystem::path file) : file_(std::move(file)) {
  std::ifstream in(*file_);
  if (!in) return;  // created on first put
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = json::parse(line);
      auto text = j.at("text").get<std::string>();
      auto v = EmbeddingVector::restored(j.at("vector").get<std::vector<double>>());
      auto k = key(j.at("provider").get<std::string>(), j.at("model").get<std::string>(), text);
      entries_.insert_or_assign(std::move(k), Entry{std::move(text), std::move(v)});
    } catch (const json::exception& e) {
      throw ParseError(file_->string(), line_no, std::string("bad cache entry: ") + e.what());
    }
  }
}

std::optional<EmbeddingVector> EmbeddingCache::get(const std::string& provider, const std::string& model,
                                                   const std::string& text) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(key(provider, model, text));
  if (it == entries_.end() || it->second.text != text) return std::nullopt;
  return it->second.vector;
}

void EmbeddingCache::put(const std::string& provider, const std::string& model, const std::string& text,
                         const EmbeddingVector& v) {
  std::unique_lock lock(mutex_);
  entries_.insert_or_assign(key(provider, model, text), Entry{text, v});
  if (file_) {
    std::ofstream out(*file_, std::ios::app);
    if (!out) throw Error("cannot append to embedding cache '" + file_->string() + "'");
    json j = {{"provider", provider}, {"model", model}, {"key", hex64(fnv1a64(text))}, {"text", text}};
    j["vector"] = std::vector<double>(v.values().begin(), v.values().end());
    out << j.dump() << '\n';
  }
}

std::size_t EmbeddingCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

// ---------------------------------------------------------------------------
// provider base

EmbeddingProvider::EmbeddingProvider() : cache_(std::make_shared<EmbeddingCache>()) {}

void EmbeddingProvider::set_cache(std::shared_ptr<EmbeddingCache> cache) {
  cache_ = cache ? std::move(cache) : std::make_shared<EmbeddingCache>();
}

std::vector<EmbeddingVector> EmbeddingProvider::embed(std::span<const std::string> texts) {
  std::vector<std::optional<EmbeddingVector>> slots(texts.size());
  std::vector<std::string> misses;
  std::unordered_set<std::string> queued;

  std::lock_guard lock(compute_mutex_);
  const std::string provider = name();
  const std::string model_name = model();
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (texts[i].empty()) throw ContractError("cannot embed an empty text (position " + std::to_string(i) + ")");
    slots[i] = cache_->get(provider, model_name, texts[i]);
    if (!slots[i] && queued.insert(texts[i]).second) misses.push_back(texts[i]);
  }

  if (!misses.empty()) {
    auto computed = compute(misses);
    if (computed.size() != misses.size()) {
      throw ContractError("provider '" + provider + "' returned " + std::to_string(computed.size()) +
                          " vectors for " + std::to_string(misses.size()) + " texts");
    }
    for (std::size_t m = 0; m < misses.size(); ++m) cache_->put(provider, model_name, misses[m], computed[m]);
    for (std::size_t i = 0; i < texts.size(); ++i) {
      if (!slots[i]) slots[i] = cache_->get(provider, model_name, texts[i]);
    }
  }

  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (auto& s : slots) {
    if (!out.empty() && s->dimension() != out.front().dimension()) {
      throw ContractError("embedding dimension mismatch within a batch: " + std::to_string(out.front().dimension()) +
                          " vs " + std::to_string(s->dimension()));
    }
    out.push_back(std::move(*s));
  }
  return out;
}

EmbeddingVector EmbeddingProvider::embed_one(const std::string& text) {
  return embed(std::span<const std::string>(&text, 1)).front();
}

std::vector<EmbeddingVector> embed(EmbeddingProvider& provider, std::span<const std::string> texts) {
  return provider.embed(texts);
}

// ---------------------------------------------------------------------------
// hashing provider

HashingEmbedder::HashingEmbedder(std::size_t dimension) : dimension_(dimension) {
  if (dimension < 8) throw ContractError("hashing embedder needs d >= 8, got " + std::to_string(dimension));
}

std::string HashingEmbedder::model() const { return "fnv1a-d" + std::to_string(dimension_); }

std::vector<EmbeddingVector> HashingEmbedder::compute(std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(deterministic_test_embedder(t, dimension_));
  return out;
}

// ---------------------------------------------------------------------------
// precomputed provider

PrecomputedEmbedder::PrecomputedEmbedder(const std::filesystem::path& file)
    : model_("file:" + file.filename().string()) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open embedding file '" + file.string() + "'");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string text;
    std::vector<double> raw;
    try {
      const auto j = json::parse(line);
      text = j.at("text").get<std::string>();
      raw = j.at("vector").get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw ParseError(file.string(), line_no, e.what());
    }
    if (dimension_ == 0) dimension_ = raw.size();
    if (raw.size() != dimension_) {
      throw ContractError(file.string() + ":" + std::to_string(line_no) + ": vector has dimension " +
                          std::to_string(raw.size()) + ", expected " + std::to_string(dimension_));
    }
    auto v = EmbeddingVector::normalized(std::move(raw));
    normalized_.try_emplace(normalize_text(text), v);
    exact_.try_emplace(std::move(text), std::move(v));
  }
}

std::vector<EmbeddingVector> PrecomputedEmbedder::compute(std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    if (auto it = exact_.find(t); it != exact_.end()) {
      out.push_back(it->second);
    } else if (auto nit = normalized_.find(normalize_text(t)); nit != normalized_.end()) {
      out.push_back(nit->second);
    } else {
      throw LookupError("no precomputed embedding for text \"" + t + "\"");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// HTTP provider

HttpProviderConfig HttpProviderConfig::from_env() {
  HttpProviderConfig cfg;
  if (const char* v = std::getenv("EMBED_BASE_URL")) cfg.base_url = v;
  if (const char* v = std::getenv("EMBED_API_KEY")) cfg.api_key = v;
  if (const char* v = std::getenv("EMBED_TIMEOUT_S")) cfg.timeout_s = std::stod(v);
  if (const char* v = std::getenv("EMBED_RETRIES")) cfg.retries = std::stoi(v);
  return cfg;
}

HttpEmbedder::HttpEmbedder(HttpProviderConfig cfg) : cfg_(std::move(cfg)) {
  const auto scheme_end = cfg_.base_url.find("://");
  if (cfg_.base_url.empty() || scheme_end == std::string::npos) {
    throw ContractError("embedding base URL must look like http://host[:port][/path], got '" + cfg_.base_url + "'");
  }
  const auto path_start = cfg_.base_url.find('/', scheme_end + 3);
  host_ = cfg_.base_url.substr(0, path_start);
  path_prefix_ = path_start == std::string::npos ? "" : cfg_.base_url.substr(path_start);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
  if (cfg_.protocol == HttpProtocol::openai && cfg_.model.empty()) {
    throw ContractError("the /v1/embeddings protocol needs a model name");
  }
  if (cfg_.batch_size == 0 || cfg_.max_in_flight == 0) throw ContractError("batch size and concurrency must be >= 1");
  if (cfg_.retries < 0) throw ContractError("retry count must be >= 0");
}

std::string HttpEmbedder::name() const {
  return cfg_.protocol == HttpProtocol::native ? "http:" + host_ + path_prefix_ : "openai:" + host_ + path_prefix_;
}

std::string HttpEmbedder::model() const { return cfg_.model.empty() ? "default" : cfg_.model; }

std::optional<std::string> HttpEmbedder::reported_model() const {
  std::lock_guard lock(model_mutex_);
  return reported_model_;
}

std::vector<EmbeddingVector> HttpEmbedder::request_batch(std::span<const std::string> texts) {
  json body;
  std::string path;
  if (cfg_.protocol == HttpProtocol::native) {
    body = {{"texts", std::vector<std::string>(texts.begin(), texts.end())}};
    path = path_prefix_ + "/embed";
  } else {
    body = {{"model", cfg_.model}, {"input", std::vector<std::string>(texts.begin(), texts.end())}};
    const bool has_version = path_prefix_.size() >= 3 && path_prefix_.compare(path_prefix_.size() - 3, 3, "/v1") == 0;
    path = path_prefix_ + (has_version ? "/embeddings" : "/v1/embeddings");
  }
  const std::string payload = body.dump();

  httplib::Headers headers;
  if (!cfg_.api_key.empty()) headers.emplace("Authorization", "Bearer " + cfg_.api_key);

  const int attempts_allowed = cfg_.retries + 1;
  int last_status = -1;
  std::string last_error;
  for (int attempt = 1; attempt <= attempts_allowed; ++attempt) {
    if (attempt > 1) {
      const auto delay = cfg_.backoff_s * static_cast<double>(1 << std::min(attempt - 2, 6));
      std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    }
    httplib::Client client(host_);
    const auto timeout = std::chrono::duration<double>(cfg_.timeout_s);
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    client.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));

    ++requests_;
    auto res = client.Post(path, headers, payload, "application/json");
    if (!res) {
      last_status = -1;
      last_error = "request to " + host_ + path + " failed: " + httplib::to_string(res.error());
      continue;
    }
    last_status = res->status;
    if (res->status < 200 || res->status >= 300) {
      last_error = "embedding endpoint " + host_ + path + " returned HTTP " + std::to_string(res->status);
      const bool retryable = res->status == 429 || res->status >= 500;
      if (!retryable) throw TransportError(last_error, attempt, last_status);
      continue;
    }

    json reply;
    try {
      reply = json::parse(res->body);
    } catch (const json::parse_error& e) {
      throw TransportError(std::string("embedding endpoint returned malformed JSON: ") + e.what(), attempt,
                           last_status);
    }

    std::vector<std::vector<double>> raw;
    try {
      if (cfg_.protocol == HttpProtocol::native) {
        raw = reply.at("vectors").get<std::vector<std::vector<double>>>();
        if (reply.contains("dimension")) {
          const auto advertised = reply.at("dimension").get<std::size_t>();
          for (const auto& v : raw) {
            if (v.size() != advertised) {
              throw ContractError("endpoint advertised dimension " + std::to_string(advertised) +
                                  " but sent a vector of length " + std::to_string(v.size()));
            }
          }
        }
        if (reply.contains("model")) {
          std::lock_guard lock(model_mutex_);
          reported_model_ = reply.at("model").get<std::string>();
        }
      } else {
        const auto& data = reply.at("data");
        raw.resize(data.size());
        for (const auto& item : data) {
          const auto index = item.at("index").get<std::size_t>();
          if (index >= raw.size()) throw ContractError("embedding index out of range in /v1/embeddings reply");
          raw[index] = item.at("embedding").get<std::vector<double>>();
        }
      }
    } catch (const json::exception& e) {
      throw TransportError(std::string("embedding reply does not match the contract: ") + e.what(), attempt,
                           last_status);
    }
    if (raw.size() != texts.size()) {
      throw ContractError("embedding endpoint returned " + std::to_string(raw.size()) + " vectors for " +
                          std::to_string(texts.size()) + " texts");
    }

    std::vector<EmbeddingVector> out;
    out.reserve(raw.size());
    for (auto& v : raw) out.push_back(EmbeddingVector::normalized(std::move(v)));
    return out;
  }
  throw TransportError(last_error, attempts_allowed, last_status);
}

std::vector<EmbeddingVector> HttpEmbedder::compute(std::span<const std::string> texts) {
  const std::size_t batches = (texts.size() + cfg_.batch_size - 1) / cfg_.batch_size;
  std::vector<std::vector<EmbeddingVector>> results(batches);

  // at most max_in_flight batches outstanding; results land in their own slot
  for (std::size_t first = 0; first < batches; first += cfg_.max_in_flight) {
    const std::size_t last = std::min(batches, first + cfg_.max_in_flight);
    std::vector<std::future<std::vector<EmbeddingVector>>> inflight;
    for (std::size_t b = first; b < last; ++b) {
      const std::size_t begin = b * cfg_.batch_size;
      const std::size_t count = std::min(cfg_.batch_size, texts.size() - begin);
      inflight.push_back(
          std::async(std::launch::async, [this, texts, begin, count] { return request_batch(texts.subspan(begin, count)); }));
    }
    for (std::size_t b = first; b < last; ++b) results[b] = inflight[b - first].get();
  }

  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (auto& batch : results) {
    for (auto& v : batch) {
      if (dimension_ == 0) dimension_ = v.dimension();
      if (v.dimension() != dimension_) {
        throw ContractError("embedding dimension changed from " + std::to_string(dimension_.load()) + " to " +
                            std::to_string(v.dimension()));
      }
      out.push_back(std::move(v));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// scoring

SimilarityMatrix embedding_similarity_matrix(std::span<const EmbeddingVector> model,
                                             std::span<const EmbeddingVector> truth) {
  return build_similarity_matrix(model.size(), truth.size(),
                                 [&](std::size_t i, std::size_t j) { return embed_similarity(model[i], truth[j]); });
}

namespace {

std::vector<std::string> prepared_texts(const QuoteSet& q, bool normalize) {
  std::vector<std::string> out;
  out.reserve(q.size());
  for (const auto& s : q.quotes) out.push_back(normalize ? normalize_text(s) : s);
  return out;
}

}  // namespace

MatchResult score_embedding(const QuoteSet& model, const QuoteSet& truth, EmbeddingProvider& provider,
                            const EmbeddingScoringOptions& opts) {
  if (truth.empty()) throw UndefinedScoreError("transcript '" + truth.transcript_id + "' has no ground-truth quotes");
  const auto m = provider.embed(prepared_texts(model, opts.normalize_inputs));
  const auto g = provider.embed(prepared_texts(truth, opts.normalize_inputs));
  if (!m.empty() && m.front().dimension() != g.front().dimension()) {
    throw ContractError("model and ground-truth embeddings differ in dimension");
  }
  return score_matrix(embedding_similarity_matrix(m, g), opts.scoring);
}

}  // namespace laughtrack
