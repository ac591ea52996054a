#pragma once

#include <span>
#include <string>
#include <vector>

namespace deepresearch {

struct RougeResult {
  int lcs_length = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// ROUGE-L via exact longest-common-subsequence dynamic programming.
// Precision = lcs/|a|, recall = lcs/|b|, f1 their harmonic mean.
// Two empty inputs compare as identical (f1 = 1); exactly one empty gives 0.
RougeResult rouge_l_f1(std::span<const std::string> a, std::span<const std::string> b);

// Convenience: tokenize_for_rouge both texts, then rouge_l_f1.
RougeResult rouge_l_f1_text(const std::string& a, const std::string& b);

}  // namespace deepresearch
