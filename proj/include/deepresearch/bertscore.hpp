#pragma once

#include "deepresearch/providers.hpp"

#include <string>
#include <vector>

namespace deepresearch {

struct PrfScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Greedy token matching over unit-normalized embedding rows: precision is
// the mean over rows of `a` of the best cosine against rows of `b`, recall
// the mirror image, f1 the harmonic mean (0 when both vanish). Empty/empty
// scores 1, one-sided empty scores 0.
PrfScore greedy_match_score(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// Splits text into chunks of at most max_tokens embedder tokens; chunk
// token sequences concatenate back to the full sequence.
std::vector<std::string> chunk_text(const std::string& text, const Embedder& embedder,
                                    int max_tokens = 510);

struct BertScoreOptions {
  int max_chunk_tokens = 510;
  // positional: pair chunks by position up to min(count), mean of pair F1s.
  // pooled: one token pool per document, a single F1.
  enum class Pairing { positional, pooled } pairing = Pairing::positional;
};

double bertscore_f1(const std::string& a, const std::string& b, Embedder& embedder,
                    const BertScoreOptions& options = {});

}  // namespace deepresearch
