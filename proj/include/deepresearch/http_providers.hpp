#pragma once

#include "deepresearch/providers.hpp"

#include <chrono>
#include <memory>
#include <mutex>
#include <string>

namespace deepresearch {

struct HttpClientOptions {
  int max_retries = 3;  // applies to retryable errors only
  int backoff_initial_ms = 100;
  double requests_per_minute = 60.0;
  int timeout_seconds = 60;
};

// Minimal token-interval limiter shared by the live clients.
class RateLimiter {
 public:
  explicit RateLimiter(double requests_per_minute);
  void acquire();

 private:
  std::chrono::steady_clock::duration interval_;
  std::chrono::steady_clock::time_point next_;
  std::mutex mutex_;
};

// Scholarly-index search client (semantic-search GET endpoint returning
// titles, abstracts and links).
class ScholarlyIndexClient : public SearchProvider {
 public:
  explicit ScholarlyIndexClient(std::string base_url = "https://api.ask.orkg.org",
                                HttpClientOptions options = {});
  ~ScholarlyIndexClient() override;

  std::vector<Document> search(const std::string& query, int limit) override;
  std::string engine_id() const override { return "orkg"; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Web-crawl search client returning full page text per result.
class WebCrawlClient : public SearchProvider {
 public:
  WebCrawlClient(std::string base_url, std::string api_key, HttpClientOptions options = {});
  ~WebCrawlClient() override;

  std::vector<Document> search(const std::string& query, int limit) override;
  std::string engine_id() const override { return "web"; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Chat-completions style LLM client; the prompt is sent as a user message
// under a JSON-only instruction and the raw message content is returned
// for schema validation upstream.
class HttpLlmClient : public LlmProvider {
 public:
  HttpLlmClient(std::string base_url, std::string api_key, std::string model,
                HttpClientOptions options = {});
  ~HttpLlmClient() override;

  std::string complete_structured(const std::string& prompt,
                                  const std::string& schema_id) override;
  std::string model_id() const override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Embedding endpoint client. POST {"text": ...} must return
// {"tokens": [...], "vectors": [[...]]} with one vector per token;
// rows are unit-normalized on receipt.
class HttpEmbedder : public Embedder {
 public:
  explicit HttpEmbedder(std::string endpoint, HttpClientOptions options = {});
  ~HttpEmbedder() override;

  std::vector<std::string> tokenize(const std::string& text) const override;
  EmbeddingMatrix embed_tokens(const std::string& text) override;
  int max_tokens() const override { return 510; }
  std::string model_id() const override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace deepresearch
