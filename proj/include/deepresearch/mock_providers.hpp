#pragma once

#include "deepresearch/providers.hpp"

#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace deepresearch {

// Stable 64-bit FNV-1a; all mock determinism rests on this, never on
// std::hash (implementation-defined across platforms).
std::uint64_t stable_hash(std::string_view text, std::uint64_t seed = 0);

struct MockLlmOptions {
  std::uint64_t seed = 0;
  // Item counts emitted per call, before the requested-count cap below.
  int queries_per_call = 8;
  int learnings_per_call = 3;
  int followups_per_call = 3;
  int report_sentences = 24;
  std::size_t context_limit_tokens = 200000;
  // Parse "up to N" from the prompt and emit at most N items, like a
  // well-behaved model. Disable to simulate chatty models that ignore
  // their budget (the agents layer must then truncate).
  bool honor_requested_count = true;
};

// Deterministic LLM stand-in: output is a pure function of
// (options.seed, prompt, schema_id). Safe for concurrent use.
class MockLlm : public LlmProvider {
 public:
  explicit MockLlm(MockLlmOptions options = {}) : options_(options) {}

  std::string complete_structured(const std::string& prompt,
                                  const std::string& schema_id) override;
  std::string model_id() const override { return "mock"; }

  // Fixed response for any prompt containing `prompt_substring` (checked
  // before generation; first registered match wins).
  void add_canned(const std::string& prompt_substring, const std::string& raw_response);

  // One-shot responses consumed in FIFO order before anything else;
  // used to script schema-violation/retry scenarios.
  void push_scripted(const std::string& raw_response);

  const std::vector<std::string>& prompts_seen() const { return prompts_seen_; }

 private:
  MockLlmOptions options_;
  std::vector<std::pair<std::string, std::string>> canned_;
  std::deque<std::string> scripted_;
  std::vector<std::string> prompts_seen_;
  mutable std::mutex mutex_;
};

struct MockSearchOptions {
  std::uint64_t seed = 0;
  // Distinct URLs available overall; smaller pools force cross-query
  // duplicates and exercise deduplication.
  int url_pool_size = 100000;
  int results_per_query = 25;
};

// Deterministic search stand-in; results are a pure function of
// (options.seed, query, limit).
class MockSearch : public SearchProvider {
 public:
  explicit MockSearch(MockSearchOptions options = {}) : options_(options) {}

  std::vector<Document> search(const std::string& query, int limit) override;
  std::string engine_id() const override { return "mock"; }

 private:
  MockSearchOptions options_;
};

// Maps each distinct token to a fixed standard basis vector, so distinct
// tokens are exactly orthogonal and every self-cosine is exactly 1.0.
// Index = stable_hash(token) % dim; pick test vocabularies small relative
// to dim when pairwise orthogonality matters (identity results never do).
class OrthonormalStubEmbedder : public Embedder {
 public:
  explicit OrthonormalStubEmbedder(int dim = 512, int max_tokens = 510)
      : dim_(dim), max_tokens_(max_tokens) {}

  std::vector<std::string> tokenize(const std::string& text) const override;
  EmbeddingMatrix embed_tokens(const std::string& text) override;
  int max_tokens() const override { return max_tokens_; }
  std::string model_id() const override { return "stub-orthonormal"; }

 private:
  int dim_;
  int max_tokens_;
};

// Maps each distinct token to a deterministic pseudo-random unit vector,
// giving generic cosines in (-1, 1) for metric oracle tests.
class HashedStubEmbedder : public Embedder {
 public:
  explicit HashedStubEmbedder(int dim = 16, std::uint64_t seed = 0, int max_tokens = 510)
      : dim_(dim), seed_(seed), max_tokens_(max_tokens) {}

  std::vector<std::string> tokenize(const std::string& text) const override;
  EmbeddingMatrix embed_tokens(const std::string& text) override;
  int max_tokens() const override { return max_tokens_; }
  std::string model_id() const override { return "stub-hashed"; }

  Eigen::VectorXd embed_word(const std::string& token) const;

 private:
  int dim_;
  std::uint64_t seed_;
  int max_tokens_;
};

}  // namespace deepresearch
