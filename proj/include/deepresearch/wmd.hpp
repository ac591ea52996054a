#pragma once

#include "deepresearch/providers.hpp"

#include <string>
#include <vector>

namespace deepresearch {

// Balanced optimal transport instance between two word distributions,
// with the optimal plan filled in by the solver. Costs are 1 - cosine,
// so they live in [0, 2].
struct TransportProblem {
  Eigen::VectorXd source_weights;
  Eigen::VectorXd target_weights;
  Eigen::MatrixXd cost;
  Eigen::MatrixXd plan;
};

struct TransportSolution {
  Eigen::MatrixXd plan;
  double cost = 0.0;
};

// Exact solver for the balanced transportation problem (network simplex
// on the spanning-tree basis). Marginals of the returned plan match the
// inputs to solver precision; the objective is the true optimum.
TransportSolution solve_transport(const Eigen::VectorXd& source, const Eigen::VectorXd& target,
                                  const Eigen::MatrixXd& cost);

struct WmdOptions {
  // Most frequent content words kept per document; keeps the exact solver
  // tractable on multi-page reports.
  int max_vocabulary = 300;
  bool remove_stopwords = true;
};

struct WmdDetail {
  std::vector<std::string> words_a;
  std::vector<std::string> words_b;
  TransportProblem problem;
  double wmd_cost = 0.0;
  double similarity = 0.0;  // 1 - wmd_cost
};

// Builds empirical word distributions (normalized frequencies over unique
// words, each word embedded in isolation), solves the transport problem
// exactly, and reports 1 - cost as similarity. Two empty texts compare as
// identical; exactly one empty text has no defined transport and throws
// EmptyTextError.
WmdDetail wmd_detail(const std::string& a, const std::string& b, Embedder& embedder,
                     const WmdOptions& options = {});

double wmd_similarity(const std::string& a, const std::string& b, Embedder& embedder,
                      const WmdOptions& options = {});

}  // namespace deepresearch
