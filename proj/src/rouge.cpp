#include "deepresearch/rouge.hpp"

#include "deepresearch/text.hpp"

#include <algorithm>

namespace deepresearch {

RougeResult rouge_l_f1(std::span<const std::string> a, std::span<const std::string> b) {
  RougeResult result;
  if (a.empty() && b.empty()) {
    result.precision = result.recall = result.f1 = 1.0;
    return result;
  }
  if (a.empty() || b.empty()) return result;

  // Two-row LCS table; rows iterate over a, columns over b.
  std::vector<int> prev(b.size() + 1, 0);
  std::vector<int> curr(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      if (a[i - 1] == b[j - 1]) {
        curr[j] = prev[j - 1] + 1;
      } else {
        curr[j] = std::max(prev[j], curr[j - 1]);
      }
    }
    std::swap(prev, curr);
  }
  result.lcs_length = prev[b.size()];
  result.precision = static_cast<double>(result.lcs_length) / static_cast<double>(a.size());
  result.recall = static_cast<double>(result.lcs_length) / static_cast<double>(b.size());
  if (result.precision + result.recall > 0.0) {
    result.f1 = 2.0 * result.precision * result.recall / (result.precision + result.recall);
  }
  return result;
}

RougeResult rouge_l_f1_text(const std::string& a, const std::string& b) {
  std::vector<std::string> ta = tokenize_for_rouge(a);
  std::vector<std::string> tb = tokenize_for_rouge(b);
  return rouge_l_f1(ta, tb);
}

}  // namespace deepresearch
