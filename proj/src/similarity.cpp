#include "deepresearch/similarity.hpp"

#include "deepresearch/bertscore.hpp"
#include "deepresearch/errors.hpp"
#include "deepresearch/rouge.hpp"
#include "deepresearch/wmd.hpp"

#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <ostream>
#include <sstream>

namespace deepresearch {

Metric metric_from_name(const std::string& name) {
  if (name == "rouge" || name == "rouge_l" || name == "rouge-l") return Metric::rouge_l;
  if (name == "bertscore" || name == "bert") return Metric::bertscore;
  if (name == "wmd") return Metric::wmd;
  throw Error("unknown metric '" + name + "' (expected rouge, bertscore or wmd)");
}

std::string metric_name(Metric metric) {
  switch (metric) {
    case Metric::rouge_l: return "rouge_l";
    case Metric::bertscore: return "bertscore";
    case Metric::wmd: return "wmd";
  }
  return "unknown";
}

namespace {

double score_pair(const std::string& a, const std::string& b, Metric metric,
                  Embedder* embedder) {
  switch (metric) {
    case Metric::rouge_l:
      return rouge_l_f1_text(a, b).f1;
    case Metric::bertscore:
      return bertscore_f1(a, b, *embedder);
    case Metric::wmd:
      return wmd_similarity(a, b, *embedder);
  }
  throw Error("unhandled metric");
}

}  // namespace

SimilarityMatrix pairwise_matrix(const std::vector<ConfigGroup>& groups, Metric metric,
                                 Embedder* embedder, const PairwiseOptions& options) {
  if (groups.empty()) throw Error("pairwise_matrix: need at least one group");
  if (metric != Metric::rouge_l && embedder == nullptr) {
    throw EmbedderError("metric " + metric_name(metric) + " requires an embedder");
  }

  const int n = static_cast<int>(groups.size());
  SimilarityMatrix matrix;
  matrix.metric = metric;
  for (const ConfigGroup& g : groups) matrix.labels.push_back(g.label);
  matrix.values = Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::quiet_NaN());
  matrix.pair_counts = Eigen::MatrixXi::Zero(n, n);

  struct Cell {
    int i;
    int j;
  };
  std::vector<Cell> cells;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) cells.push_back(Cell{i, j});
  }

  auto compute_cell = [&](const Cell& cell) {
    std::vector<AlignedPair> pairs = align_groups(groups[static_cast<std::size_t>(cell.i)],
                                                  groups[static_cast<std::size_t>(cell.j)]);
    matrix.pair_counts(cell.i, cell.j) = static_cast<int>(pairs.size());
    matrix.pair_counts(cell.j, cell.i) = static_cast<int>(pairs.size());
    if (pairs.empty()) return;  // cell stays missing, not 0
    double total = 0.0;
    for (const AlignedPair& pair : pairs) {
      total += score_pair(pair.left->body, pair.right->body, metric, embedder);
    }
    double mean = total / static_cast<double>(pairs.size());
    matrix.values(cell.i, cell.j) = mean;
    matrix.values(cell.j, cell.i) = mean;
  };

  if (options.jobs > 1 && cells.size() > 1) {
    std::vector<std::future<void>> pending;
    std::atomic<std::size_t> next{0};
    int workers = std::min<int>(options.jobs, static_cast<int>(cells.size()));
    for (int w = 0; w < workers; ++w) {
      pending.push_back(std::async(std::launch::async, [&]() {
        for (;;) {
          std::size_t k = next.fetch_add(1);
          if (k >= cells.size()) return;
          compute_cell(cells[k]);
        }
      }));
    }
    for (auto& f : pending) f.get();
  } else {
    for (const Cell& cell : cells) compute_cell(cell);
  }

  for (int i = 0; i < n; ++i) {
    double d = matrix.values(i, i);
    if (matrix.pair_counts(i, i) > 0 && std::abs(d - 1.0) > options.diagonal_tolerance) {
      throw Error("self-similarity for " + matrix.labels[static_cast<std::size_t>(i)].str() +
                  " is " + std::to_string(d) + ", expected 1.0");
    }
  }
  return matrix;
}

namespace {

void write_grid(std::ostream& out, const SimilarityMatrix& matrix, bool counts) {
  out << "config";
  for (const ConfigLabel& label : matrix.labels) out << ',' << csv_escape(label.str());
  out << '\n';
  const int n = static_cast<int>(matrix.labels.size());
  std::ostringstream buffer;
  buffer.precision(6);
  buffer << std::fixed;
  for (int i = 0; i < n; ++i) {
    out << csv_escape(matrix.labels[static_cast<std::size_t>(i)].str());
    for (int j = 0; j < n; ++j) {
      out << ',';
      if (counts) {
        out << matrix.pair_counts(i, j);
      } else if (!std::isnan(matrix.values(i, j))) {
        buffer.str("");
        buffer << matrix.values(i, j);
        out << buffer.str();
      }
      // missing cells stay empty
    }
    out << '\n';
  }
}

}  // namespace

void write_matrix_csv(std::ostream& out, const SimilarityMatrix& matrix) {
  write_grid(out, matrix, false);
}

void write_pair_counts_csv(std::ostream& out, const SimilarityMatrix& matrix) {
  write_grid(out, matrix, true);
}

}  // namespace deepresearch
