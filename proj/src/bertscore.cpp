#include "deepresearch/bertscore.hpp"

#include "deepresearch/errors.hpp"
#include "deepresearch/text.hpp"

namespace deepresearch {

namespace {

// Plain sequential accumulation: summation order is part of the metric's
// reproducibility contract, so no vectorized reduction here.
double row_dot(const Eigen::MatrixXd& a, Eigen::Index i, const Eigen::MatrixXd& b,
               Eigen::Index j) {
  double sum = 0.0;
  for (Eigen::Index k = 0; k < a.cols(); ++k) sum += a(i, k) * b(j, k);
  return sum;
}

double best_match_mean(const Eigen::MatrixXd& from, const Eigen::MatrixXd& to) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < from.rows(); ++i) {
    double best = row_dot(from, i, to, 0);
    for (Eigen::Index j = 1; j < to.rows(); ++j) {
      best = std::max(best, row_dot(from, i, to, j));
    }
    total += best;
  }
  return total / static_cast<double>(from.rows());
}

Eigen::MatrixXd vstack(const std::vector<Eigen::MatrixXd>& blocks) {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  for (const Eigen::MatrixXd& b : blocks) {
    rows += b.rows();
    cols = std::max(cols, b.cols());
  }
  Eigen::MatrixXd out(rows, cols);
  Eigen::Index at = 0;
  for (const Eigen::MatrixXd& b : blocks) {
    out.middleRows(at, b.rows()) = b;
    at += b.rows();
  }
  return out;
}

}  // namespace

PrfScore greedy_match_score(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  PrfScore score;
  if (a.rows() == 0 && b.rows() == 0) {
    score.precision = score.recall = score.f1 = 1.0;
    return score;
  }
  if (a.rows() == 0 || b.rows() == 0) return score;
  if (a.cols() != b.cols()) {
    throw EmbedderError("embedding dimensions disagree: " + std::to_string(a.cols()) + " vs " +
                        std::to_string(b.cols()));
  }
  score.precision = best_match_mean(a, b);
  score.recall = best_match_mean(b, a);
  if (score.precision + score.recall != 0.0) {
    score.f1 = 2.0 * score.precision * score.recall / (score.precision + score.recall);
  }
  return score;
}

std::vector<std::string> chunk_text(const std::string& text, const Embedder& embedder,
                                    int max_tokens) {
  if (max_tokens < 1) max_tokens = 1;
  std::vector<std::string> chunks;
  for (const std::vector<std::string>& chunk : chunk_by_tokens(embedder.tokenize(text), max_tokens)) {
    chunks.push_back(join(chunk, " "));
  }
  return chunks;
}

double bertscore_f1(const std::string& a, const std::string& b, Embedder& embedder,
                    const BertScoreOptions& options) {
  int max_tokens = std::min(options.max_chunk_tokens, embedder.max_tokens());
  std::vector<std::string> chunks_a = chunk_text(a, embedder, max_tokens);
  std::vector<std::string> chunks_b = chunk_text(b, embedder, max_tokens);

  if (chunks_a.empty() && chunks_b.empty()) return 1.0;
  if (chunks_a.empty() || chunks_b.empty()) return 0.0;

  auto embed_all = [&](const std::vector<std::string>& chunks) {
    std::vector<Eigen::MatrixXd> mats;
    mats.reserve(chunks.size());
    for (const std::string& c : chunks) mats.push_back(embedder.embed_tokens(c).vectors);
    return mats;
  };
  std::vector<Eigen::MatrixXd> mats_a = embed_all(chunks_a);
  std::vector<Eigen::MatrixXd> mats_b = embed_all(chunks_b);

  if (options.pairing == BertScoreOptions::Pairing::pooled) {
    return greedy_match_score(vstack(mats_a), vstack(mats_b)).f1;
  }

  std::size_t pairs = std::min(mats_a.size(), mats_b.size());
  double total = 0.0;
  for (std::size_t t = 0; t < pairs; ++t) {
    total += greedy_match_score(mats_a[t], mats_b[t]).f1;
  }
  return total / static_cast<double>(pairs);
}

}  // namespace deepresearch
