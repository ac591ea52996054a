#include "deepresearch/wmd.hpp"

#include "deepresearch/errors.hpp"
#include "deepresearch/text.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

namespace deepresearch {

namespace {

constexpr double kReducedCostEps = 1e-12;

struct Arc {
  int row = 0;
  int col = 0;  // column index in [0, n)
  double flow = 0.0;
};

// Transportation simplex over a spanning-tree basis. Nodes 0..m-1 are
// rows, m..m+n-1 are columns; the basis always holds m+n-1 arcs.
class TransportSimplex {
 public:
  TransportSimplex(const Eigen::VectorXd& source, const Eigen::VectorXd& target,
                   const Eigen::MatrixXd& cost)
      : a_(source), b_(target), cost_(cost), m_(static_cast<int>(source.size())),
        n_(static_cast<int>(target.size())) {}

  TransportSolution solve() {
    build_initial_basis();

    // Dantzig pricing with a hard pivot cap; Bland's rule takes over well
    // before the cap to rule out cycling on degenerate bases.
    const long long bland_after = 64LL * (m_ + n_) * (m_ + n_) + 1024;
    const long long max_pivots = 64 * bland_after + 4096;
    for (long long pivot = 0; pivot < max_pivots; ++pivot) {
      compute_duals();
      int enter_row = -1;
      int enter_col = -1;
      if (!find_entering(pivot >= bland_after, enter_row, enter_col)) {
        return extract();
      }
      pivot_on(enter_row, enter_col);
    }
    throw Error("transport solver failed to converge");
  }

 private:
  void build_initial_basis() {
    basic_ = std::vector<std::vector<int>>(static_cast<std::size_t>(m_),
                                           std::vector<int>(static_cast<std::size_t>(n_), -1));
    adjacency_.assign(static_cast<std::size_t>(m_ + n_), {});
    Eigen::VectorXd a = a_;
    Eigen::VectorXd b = b_;
    int i = 0;
    int j = 0;
    for (;;) {
      double x = std::min(a[i], b[j]);
      add_arc(i, j, x);
      a[i] -= x;
      b[j] -= x;
      if (i == m_ - 1 && j == n_ - 1) break;
      bool advance_row;
      if (i == m_ - 1) {
        advance_row = false;
      } else if (j == n_ - 1) {
        advance_row = true;
      } else {
        advance_row = a[i] <= b[j];
      }
      if (advance_row) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  void add_arc(int row, int col, double flow) {
    int id = static_cast<int>(arcs_.size());
    arcs_.push_back(Arc{row, col, flow});
    basic_[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] = id;
    adjacency_[static_cast<std::size_t>(row)].push_back(id);
    adjacency_[static_cast<std::size_t>(m_ + col)].push_back(id);
  }

  void remove_arc(int id) {
    const Arc& arc = arcs_[static_cast<std::size_t>(id)];
    basic_[static_cast<std::size_t>(arc.row)][static_cast<std::size_t>(arc.col)] = -1;
    auto detach = [&](int node) {
      auto& list = adjacency_[static_cast<std::size_t>(node)];
      list.erase(std::find(list.begin(), list.end(), id));
    };
    detach(arc.row);
    detach(m_ + arc.col);
    free_ids_.push_back(id);
  }

  void reuse_arc(int row, int col, double flow) {
    int id = free_ids_.back();
    free_ids_.pop_back();
    arcs_[static_cast<std::size_t>(id)] = Arc{row, col, flow};
    basic_[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] = id;
    adjacency_[static_cast<std::size_t>(row)].push_back(id);
    adjacency_[static_cast<std::size_t>(m_ + col)].push_back(id);
  }

  // u_i + v_j = c_ij on basic arcs, anchored at u_0 = 0; the basis is a
  // spanning tree, so one sweep fixes every dual.
  void compute_duals() {
    u_.assign(static_cast<std::size_t>(m_), 0.0);
    v_.assign(static_cast<std::size_t>(n_), 0.0);
    std::vector<char> seen(static_cast<std::size_t>(m_ + n_), 0);
    std::queue<int> frontier;
    frontier.push(0);
    seen[0] = 1;
    while (!frontier.empty()) {
      int node = frontier.front();
      frontier.pop();
      for (int id : adjacency_[static_cast<std::size_t>(node)]) {
        const Arc& arc = arcs_[static_cast<std::size_t>(id)];
        int other = node < m_ ? m_ + arc.col : arc.row;
        if (seen[static_cast<std::size_t>(other)]) continue;
        seen[static_cast<std::size_t>(other)] = 1;
        if (other >= m_) {
          v_[static_cast<std::size_t>(arc.col)] =
              cost_(arc.row, arc.col) - u_[static_cast<std::size_t>(arc.row)];
        } else {
          u_[static_cast<std::size_t>(arc.row)] =
              cost_(arc.row, arc.col) - v_[static_cast<std::size_t>(arc.col)];
        }
        frontier.push(other);
      }
    }
  }

  bool find_entering(bool bland, int& out_row, int& out_col) const {
    double best = -kReducedCostEps;
    bool found = false;
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) {
        if (basic_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] >= 0) continue;
        double reduced =
            cost_(i, j) - u_[static_cast<std::size_t>(i)] - v_[static_cast<std::size_t>(j)];
        if (reduced < best) {
          best = reduced;
          out_row = i;
          out_col = j;
          found = true;
          if (bland) return true;
        }
      }
    }
    return found;
  }

  void pivot_on(int enter_row, int enter_col) {
    std::vector<int> path = path_arcs(enter_row, m_ + enter_col);

    // Walking from the entering cell's row end, path arcs alternate
    // -,+,-,+,... around the unique cycle the entering arc closes.
    double theta = std::numeric_limits<double>::infinity();
    int leaving = -1;
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const Arc& arc = arcs_[static_cast<std::size_t>(path[k])];
      if (arc.flow < theta) {
        theta = arc.flow;
        leaving = path[k];
      }
    }
    for (std::size_t k = 0; k < path.size(); ++k) {
      Arc& arc = arcs_[static_cast<std::size_t>(path[k])];
      if (k % 2 == 0) {
        arc.flow -= theta;
      } else {
        arc.flow += theta;
      }
    }
    remove_arc(leaving);
    reuse_arc(enter_row, enter_col, theta);
  }

  // Arc ids along the tree path from `from` to `to`, ordered from the
  // `from` end.
  std::vector<int> path_arcs(int from, int to) const {
    std::vector<int> prev_arc(static_cast<std::size_t>(m_ + n_), -1);
    std::vector<int> prev_node(static_cast<std::size_t>(m_ + n_), -1);
    std::vector<char> seen(static_cast<std::size_t>(m_ + n_), 0);
    std::queue<int> frontier;
    frontier.push(from);
    seen[static_cast<std::size_t>(from)] = 1;
    while (!frontier.empty()) {
      int node = frontier.front();
      frontier.pop();
      if (node == to) break;
      for (int id : adjacency_[static_cast<std::size_t>(node)]) {
        const Arc& arc = arcs_[static_cast<std::size_t>(id)];
        int other = node < m_ ? m_ + arc.col : arc.row;
        if (seen[static_cast<std::size_t>(other)]) continue;
        seen[static_cast<std::size_t>(other)] = 1;
        prev_arc[static_cast<std::size_t>(other)] = id;
        prev_node[static_cast<std::size_t>(other)] = node;
        frontier.push(other);
      }
    }
    std::vector<int> reversed;
    for (int node = to; node != from; node = prev_node[static_cast<std::size_t>(node)]) {
      reversed.push_back(prev_arc[static_cast<std::size_t>(node)]);
    }
    return {reversed.rbegin(), reversed.rend()};
  }

  TransportSolution extract() const {
    TransportSolution solution;
    solution.plan = Eigen::MatrixXd::Zero(m_, n_);
    double total = 0.0;
    for (std::size_t id = 0; id < arcs_.size(); ++id) {
      const Arc& arc = arcs_[id];
      if (basic_[static_cast<std::size_t>(arc.row)][static_cast<std::size_t>(arc.col)] !=
          static_cast<int>(id)) {
        continue;
      }
      double flow = arc.flow < 0.0 && arc.flow > -1e-12 ? 0.0 : arc.flow;
      solution.plan(arc.row, arc.col) = flow;
      total += flow * cost_(arc.row, arc.col);
    }
    solution.cost = total;
    return solution;
  }

  Eigen::VectorXd a_;
  Eigen::VectorXd b_;
  const Eigen::MatrixXd& cost_;
  int m_;
  int n_;
  std::vector<Arc> arcs_;
  std::vector<int> free_ids_;
  std::vector<std::vector<int>> basic_;  // (i,j) -> arc id or -1
  std::vector<std::vector<int>> adjacency_;
  std::vector<double> u_;
  std::vector<double> v_;
};

struct WordDistribution {
  std::vector<std::string> words;
  Eigen::VectorXd weights;
};

WordDistribution build_distribution(const std::string& text, const WmdOptions& options) {
  std::vector<std::string> tokens = word_tokens(text);
  std::vector<std::string> content;
  if (options.remove_stopwords) {
    const auto& stop = default_stopwords();
    for (std::string& t : tokens) {
      if (!stop.count(t)) content.push_back(std::move(t));
    }
    // A document made entirely of stopwords still has a distribution.
    if (content.empty()) content = word_tokens(text);
  } else {
    content = std::move(tokens);
  }

  std::map<std::string, int> freq;
  for (const std::string& w : content) ++freq[w];

  std::vector<std::pair<std::string, int>> ranked(freq.begin(), freq.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
    if (x.second != y.second) return x.second > y.second;
    return x.first < y.first;
  });
  if (ranked.size() > static_cast<std::size_t>(options.max_vocabulary)) {
    ranked.resize(static_cast<std::size_t>(options.max_vocabulary));
  }

  WordDistribution dist;
  long long total = 0;
  for (const auto& [word, count] : ranked) total += count;
  dist.weights.resize(static_cast<Eigen::Index>(ranked.size()));
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    dist.words.push_back(ranked[i].first);
    dist.weights[static_cast<Eigen::Index>(i)] =
        static_cast<double>(ranked[i].second) / static_cast<double>(total);
  }
  return dist;
}

// One row per unique word, embedded in isolation (batched through the
// embedder window).
Eigen::MatrixXd embed_words(const std::vector<std::string>& words, Embedder& embedder) {
  Eigen::MatrixXd out;
  std::size_t window = static_cast<std::size_t>(std::max(1, embedder.max_tokens()));
  Eigen::Index at = 0;
  for (std::size_t start = 0; start < words.size(); start += window) {
    std::size_t end = std::min(words.size(), start + window);
    std::vector<std::string> slice(words.begin() + static_cast<std::ptrdiff_t>(start),
                                   words.begin() + static_cast<std::ptrdiff_t>(end));
    EmbeddingMatrix m = embedder.embed_tokens(join(slice, " "));
    if (m.tokens.size() != slice.size()) {
      throw EmbedderError("embedder returned " + std::to_string(m.tokens.size()) +
                          " rows for " + std::to_string(slice.size()) + " words");
    }
    if (out.size() == 0) {
      out.resize(static_cast<Eigen::Index>(words.size()), m.vectors.cols());
    }
    out.middleRows(at, m.vectors.rows()) = m.vectors;
    at += m.vectors.rows();
  }
  return out;
}

double row_dot(const Eigen::MatrixXd& a, Eigen::Index i, const Eigen::MatrixXd& b,
               Eigen::Index j) {
  double sum = 0.0;
  for (Eigen::Index k = 0; k < a.cols(); ++k) sum += a(i, k) * b(j, k);
  return sum;
}

}  // namespace

TransportSolution solve_transport(const Eigen::VectorXd& source, const Eigen::VectorXd& target,
                                  const Eigen::MatrixXd& cost) {
  if (source.size() == 0 || target.size() == 0) {
    throw Error("solve_transport: empty marginals");
  }
  if (cost.rows() != source.size() || cost.cols() != target.size()) {
    throw Error("solve_transport: cost matrix shape mismatch");
  }
  if ((source.array() < -1e-12).any() || (target.array() < -1e-12).any()) {
    throw Error("solve_transport: negative weights");
  }
  if (std::abs(source.sum() - target.sum()) > 1e-9) {
    throw Error("solve_transport: unbalanced marginals");
  }
  return TransportSimplex(source, target, cost).solve();
}

WmdDetail wmd_detail(const std::string& a, const std::string& b, Embedder& embedder,
                     const WmdOptions& options) {
  WordDistribution da = build_distribution(a, options);
  WordDistribution db = build_distribution(b, options);

  WmdDetail detail;
  if (da.words.empty() && db.words.empty()) {
    detail.similarity = 1.0;
    return detail;
  }
  if (da.words.empty() || db.words.empty()) {
    throw EmptyTextError("word mover's distance is undefined against an empty document");
  }

  Eigen::MatrixXd ea = embed_words(da.words, embedder);
  Eigen::MatrixXd eb = embed_words(db.words, embedder);

  detail.problem.cost.resize(ea.rows(), eb.rows());
  for (Eigen::Index i = 0; i < ea.rows(); ++i) {
    for (Eigen::Index j = 0; j < eb.rows(); ++j) {
      detail.problem.cost(i, j) = 1.0 - row_dot(ea, i, eb, j);
    }
  }
  detail.problem.source_weights = da.weights;
  detail.problem.target_weights = db.weights;

  TransportSolution solution =
      solve_transport(da.weights, db.weights, detail.problem.cost);
  detail.problem.plan = solution.plan;
  // Costs are 1 - cosine >= 0 up to round-off; a -1e-16 optimum is noise
  // and would push the similarity above 1.
  detail.wmd_cost = std::max(0.0, solution.cost);
  detail.similarity = 1.0 - detail.wmd_cost;
  detail.words_a = std::move(da.words);
  detail.words_b = std::move(db.words);
  return detail;
}

double wmd_similarity(const std::string& a, const std::string& b, Embedder& embedder,
                      const WmdOptions& options) {
  return wmd_detail(a, b, embedder, options).similarity;
}

}  // namespace deepresearch
