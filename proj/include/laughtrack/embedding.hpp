#pragma once

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "laughtrack/pairwise.hpp"

namespace laughtrack {

/// Unit-norm embedding. Only constructible through normalized(), so every
/// instance has finite entries and Euclidean norm 1.
class EmbeddingVector {
 public:
  EmbeddingVector() = default;

  /// L2-normalizes raw provider output. Throws DegenerateInputError for a
  /// zero or non-finite vector.
  static EmbeddingVector normalized(std::vector<double> raw);
  /// Keeps a vector that is already unit-norm (within 1e-9) bit for bit, so
  /// cached vectors reload exactly; anything else goes through normalized().
  static EmbeddingVector restored(std::vector<double> unit);

  std::span<const double> values() const { return values_; }
  std::size_t dimension() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  bool operator==(const EmbeddingVector&) const = default;

 private:
  explicit EmbeddingVector(std::vector<double> v) : values_(std::move(v)) {}
  std::vector<double> values_;
};

/// Cosine of two unit vectors clamped to [0,1]. Throws ContractError on a
/// dimension mismatch.
double embed_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

/// Feature-hashing embedder used as a deterministic, offline provider: each
/// whitespace token of the normalized text adds +-1 to one of d buckets, and
/// the counts are L2-normalized. Texts with no tokens (or whose counts cancel
/// to zero) map to e_1. Requires d >= 8.
EmbeddingVector deterministic_test_embedder(std::string_view text, std::size_t d);

/// Bucket and sign a token lands on in deterministic_test_embedder.
struct HashedToken {
  std::size_t bucket;
  int sign;
};
HashedToken hash_token(std::string_view token, std::size_t d);

enum class ProviderKind { deterministic_test, precomputed_file, http_endpoint };

/// Thread-safe embedding cache keyed by (provider, model, text hash). With a
/// backing file, existing entries are loaded on construction and new ones are
/// appended as JSONL.
class EmbeddingCache {
 public:
  EmbeddingCache() = default;
  explicit EmbeddingCache(std::filesystem::path file);

  std::optional<EmbeddingVector> get(const std::string& provider, const std::string& model,
                                     const std::string& text) const;
  void put(const std::string& provider, const std::string& model, const std::string& text,
           const EmbeddingVector& v);
  std::size_t size() const;

 private:
  struct Entry {
    std::string text;
    EmbeddingVector vector;
  };
  static std::string key(const std::string& provider, const std::string& model, const std::string& text);

  std::optional<std::filesystem::path> file_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, Entry> entries_;
};

class EmbeddingProvider {
 public:
  EmbeddingProvider();
  virtual ~EmbeddingProvider() = default;
  EmbeddingProvider(const EmbeddingProvider&) = delete;
  EmbeddingProvider& operator=(const EmbeddingProvider&) = delete;

  virtual std::string name() const = 0;
  virtual std::string model() const = 0;
  virtual ProviderKind kind() const = 0;
  /// Dimensionality, or 0 while unknown (remote provider before its first reply).
  virtual std::size_t dimension() const = 0;

  /// One unit vector per text, in input order. Cached texts are not
  /// recomputed; misses are deduplicated and computed in one call. Throws
  /// ContractError for empty texts or mixed dimensions.
  std::vector<EmbeddingVector> embed(std::span<const std::string> texts);
  EmbeddingVector embed_one(const std::string& text);

  void set_cache(std::shared_ptr<EmbeddingCache> cache);
  const std::shared_ptr<EmbeddingCache>& cache() const { return cache_; }

 protected:
  /// Embeds distinct, uncached texts.
  virtual std::vector<EmbeddingVector> compute(std::span<const std::string> texts) = 0;

 private:
  std::shared_ptr<EmbeddingCache> cache_;
  std::mutex compute_mutex_;
};

std::vector<EmbeddingVector> embed(EmbeddingProvider& provider, std::span<const std::string> texts);

class HashingEmbedder final : public EmbeddingProvider {
 public:
  explicit HashingEmbedder(std::size_t dimension = 256);

  std::string name() const override { return "hashing"; }
  std::string model() const override;
  ProviderKind kind() const override { return ProviderKind::deterministic_test; }
  std::size_t dimension() const override { return dimension_; }

 protected:
  std::vector<EmbeddingVector> compute(std::span<const std::string> texts) override;

 private:
  std::size_t dimension_;
};

/// Vectors read from JSONL lines {"text": str, "vector": [float]}. Lookup is
/// by exact text first, then by normalized text.
class PrecomputedEmbedder final : public EmbeddingProvider {
 public:
  explicit PrecomputedEmbedder(const std::filesystem::path& file);

  std::string name() const override { return "precomputed"; }
  std::string model() const override { return model_; }
  ProviderKind kind() const override { return ProviderKind::precomputed_file; }
  std::size_t dimension() const override { return dimension_; }
  std::size_t entries() const { return exact_.size(); }

 protected:
  std::vector<EmbeddingVector> compute(std::span<const std::string> texts) override;

 private:
  std::string model_;
  std::size_t dimension_ = 0;
  std::unordered_map<std::string, EmbeddingVector> exact_;
  std::unordered_map<std::string, EmbeddingVector> normalized_;
};

enum class HttpProtocol {
  /// POST {base}/embed {"texts": [...]} -> {"vectors", "dimension", "model"}
  native,
  /// POST {base}/v1/embeddings {"model", "input": [...]} -> {"data": [{"embedding", "index"}]}
  openai,
};

struct HttpProviderConfig {
  std::string base_url;
  std::string api_key;  // sent as a bearer token when non-empty
  std::string model;    // required for the openai protocol
  HttpProtocol protocol = HttpProtocol::native;
  double timeout_s = 30.0;
  int retries = 2;
  std::size_t batch_size = 32;
  std::size_t max_in_flight = 4;
  double backoff_s = 0.2;

  /// Reads EMBED_BASE_URL, EMBED_API_KEY, EMBED_TIMEOUT_S and EMBED_RETRIES.
  static HttpProviderConfig from_env();
};

class HttpEmbedder final : public EmbeddingProvider {
 public:
  explicit HttpEmbedder(HttpProviderConfig cfg);

  std::string name() const override;
  std::string model() const override;
  ProviderKind kind() const override { return ProviderKind::http_endpoint; }
  std::size_t dimension() const override { return dimension_.load(); }
  /// Model name the server reported, when it did.
  std::optional<std::string> reported_model() const;
  /// HTTP requests issued so far, retries included.
  std::size_t request_count() const { return requests_.load(); }
  const HttpProviderConfig& config() const { return cfg_; }

 protected:
  std::vector<EmbeddingVector> compute(std::span<const std::string> texts) override;

 private:
  std::vector<EmbeddingVector> request_batch(std::span<const std::string> texts);

  HttpProviderConfig cfg_;
  std::string host_;         // scheme://host[:port]
  std::string path_prefix_;  // path component of base_url without trailing '/'
  std::atomic<std::size_t> dimension_{0};
  std::atomic<std::size_t> requests_{0};
  mutable std::mutex model_mutex_;
  std::optional<std::string> reported_model_;
};

struct EmbeddingScoringOptions {
  ScoringOptions scoring;
  bool normalize_inputs = true;
};

/// Embeds both quote sets and scores the cosine matrix with the shared engine.
MatchResult score_embedding(const QuoteSet& model, const QuoteSet& truth, EmbeddingProvider& provider,
                            const EmbeddingScoringOptions& opts = {});

SimilarityMatrix embedding_similarity_matrix(std::span<const EmbeddingVector> model,
                                             std::span<const EmbeddingVector> truth);

}  // namespace laughtrack
