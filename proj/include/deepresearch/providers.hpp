#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace deepresearch {

// A retrieved document. Scholarly-index providers fill body with the
// abstract; web-crawl providers fill it with the full page text.
struct Document {
  std::optional<std::string> title;
  std::string body;
  std::string url;
  std::string provider;
};

// Token-level embeddings: one unit-normalized row per tokenizer token.
struct EmbeddingMatrix {
  std::vector<std::string> tokens;
  Eigen::MatrixXd vectors;
  std::string model_id;
};

// Scales every row to Euclidean norm 1; zero rows are left untouched.
void normalize_rows(Eigen::MatrixXd& m);

class LlmProvider {
 public:
  virtual ~LlmProvider() = default;

  // Returns the raw model text for the given prompt. The caller validates
  // it against the schema identified by schema_id ("serp_queries",
  // "node_result" or "report"); providers only route the request.
  virtual std::string complete_structured(const std::string& prompt,
                                          const std::string& schema_id) = 0;

  virtual std::string model_id() const = 0;
};

class SearchProvider {
 public:
  virtual ~SearchProvider() = default;

  // At most `limit` documents; an empty result is not an error.
  virtual std::vector<Document> search(const std::string& query, int limit) = 0;

  virtual std::string engine_id() const = 0;
};

class Embedder {
 public:
  virtual ~Embedder() = default;

  virtual std::vector<std::string> tokenize(const std::string& text) const = 0;

  // One vector per tokenizer token, rows unit-normalized.
  // Throws TextTooLong when the text exceeds max_tokens(); callers chunk first.
  virtual EmbeddingMatrix embed_tokens(const std::string& text) = 0;

  virtual int max_tokens() const { return 510; }
  virtual std::string model_id() const = 0;
};

}  // namespace deepresearch
