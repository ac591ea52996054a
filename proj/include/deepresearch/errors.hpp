#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace deepresearch {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Failures originating in an LLM, search, or embedding provider.
class ProviderError : public Error {
 public:
  using Error::Error;
};

class NetworkError : public ProviderError {
 public:
  explicit NetworkError(const std::string& what, bool retryable = true)
      : ProviderError(what), retryable_(retryable) {}
  bool retryable() const { return retryable_; }

 private:
  bool retryable_;
};

class QuotaExceeded : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

class MalformedResponse : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

class ProviderRefusal : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

class ContextLengthExceeded : public ProviderError {
 public:
  ContextLengthExceeded(const std::string& what, std::size_t token_estimate)
      : ProviderError(what), token_estimate_(token_estimate) {}
  std::size_t token_estimate() const { return token_estimate_; }

 private:
  std::size_t token_estimate_;
};

// Input exceeds an embedder's token window; callers are expected to chunk.
class TextTooLong : public ProviderError {
 public:
  TextTooLong(const std::string& what, std::size_t token_count)
      : ProviderError(what), token_count_(token_count) {}
  std::size_t token_count() const { return token_count_; }

 private:
  std::size_t token_count_;
};

class EmbedderError : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

// Structured LLM output failed validation. `path` points at the offending
// field, e.g. "$.queries[2].researchGoal".
class SchemaViolation : public Error {
 public:
  SchemaViolation(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// A configured query or document cap was hit mid-run.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// Report filename does not follow <index>_<model>_<engine>_d<depth>_b<breadth>.md.
class MalformedName : public Error {
 public:
  using Error::Error;
};

class UnknownCategory : public Error {
 public:
  using Error::Error;
};

// A metric was asked to score an input for which it is undefined
// (e.g. Word Mover's Distance against an empty document).
class EmptyTextError : public Error {
 public:
  using Error::Error;
};

class ZeroLength : public Error {
 public:
  using Error::Error;
};

}  // namespace deepresearch
