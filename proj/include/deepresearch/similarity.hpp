#pragma once

#include "deepresearch/corpus.hpp"
#include "deepresearch/providers.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace deepresearch {

enum class Metric { rouge_l, bertscore, wmd };

Metric metric_from_name(const std::string& name);  // throws Error on unknown names
std::string metric_name(Metric metric);

// Mean pairwise similarity between configuration groups over their aligned
// index sets. Cells with no index overlap are NaN and serialize as empty
// CSV fields; the diagonal compares every report with itself and must
// come out 1.0.
struct SimilarityMatrix {
  std::vector<ConfigLabel> labels;
  Metric metric = Metric::rouge_l;
  Eigen::MatrixXd values;       // symmetric; NaN marks missing
  Eigen::MatrixXi pair_counts;  // |D_ij| per cell
};

struct PairwiseOptions {
  int jobs = 1;
  double diagonal_tolerance = 1e-9;  // self-similarity must sit within this of 1.0
};

// embedder may be null for rouge_l and is required for bertscore/wmd.
SimilarityMatrix pairwise_matrix(const std::vector<ConfigGroup>& groups, Metric metric,
                                 Embedder* embedder = nullptr,
                                 const PairwiseOptions& options = {});

void write_matrix_csv(std::ostream& out, const SimilarityMatrix& matrix);
void write_pair_counts_csv(std::ostream& out, const SimilarityMatrix& matrix);

}  // namespace deepresearch
