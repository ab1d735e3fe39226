#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "steg/csv.hpp"
#include "steg/error.hpp"
#include "steg/flow_graph.hpp"
#include "steg/random.hpp"
#include "steg/types.hpp"

namespace steg {

struct WalkConfig {
  double p = 1.0;
  double q = 1.0;
  std::size_t walk_length = 80;
  std::size_t walks_per_node = 10;
  std::size_t window = 10;
  std::size_t dim = 64;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(p > 0.0) || !(q > 0.0)) throw Error(ErrorCode::InvalidConfig, "p and q must be > 0");
    if (dim < 1) throw Error(ErrorCode::InvalidConfig, "dim must be >= 1");
    if (walk_length < 2) throw Error(ErrorCode::InvalidConfig, "walk_length must be >= 2");
    if (!(learning_rate > 0.0)) throw Error(ErrorCode::InvalidConfig, "learning_rate must be > 0");
  }
};

/// Unnormalized node2vec transition probability π = α_pq(t, c) · w, where
/// `distance` is the hop distance between the previous node t and the
/// candidate c.
inline double transition_weight(int distance, double p, double q, double weight) {
  switch (distance) {
    case 0: return weight / p;
    case 1: return weight;
    case 2: return weight / q;
    default:
      throw Error(ErrorCode::InvalidDistance,
                  "hop distance must be 0, 1 or 2, got " + std::to_string(distance));
  }
}

/// Walker's alias method: O(1) draws from a fixed discrete distribution.
class AliasTable {
 public:
  AliasTable() = default;

  explicit AliasTable(const std::vector<double>& weights) {
    const std::size_t n = weights.size();
    if (n == 0) return;
    double total = 0.0;
    for (double w : weights) total += w;
    prob_.assign(n, 0.0);
    alias_.assign(n, 0);
    std::vector<double> scaled(n);
    std::vector<std::size_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
      scaled[i] = weights[i] * static_cast<double>(n) / total;
      (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
      const std::size_t s = small.back();
      small.pop_back();
      const std::size_t l = large.back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] -= 1.0 - scaled[s];
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    for (auto i : large) prob_[i] = 1.0;
    for (auto i : small) prob_[i] = 1.0;
  }

  bool empty() const { return prob_.empty(); }

  std::size_t sample(Rng& rng) const {
    const std::size_t i = static_cast<std::size_t>(rng.index(prob_.size()));
    return rng.uniform() < prob_[i] ? i : alias_[i];
  }

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
};

/// Simple weighted graph obtained by collapsing parallel directed edges;
/// the weight of u→c is the number of flow edges from u to c.
class WeightedAdjacency {
 public:
  explicit WeightedAdjacency(const FlowGraph& graph) : neighbors_(graph.node_count()) {
    std::vector<std::vector<std::size_t>> raw(graph.node_count());
    for (const auto& e : graph.edges()) raw[e.src].push_back(e.dst);
    for (std::size_t v = 0; v < raw.size(); ++v) {
      auto& targets = raw[v];
      std::sort(targets.begin(), targets.end());
      for (std::size_t i = 0; i < targets.size();) {
        std::size_t j = i;
        while (j < targets.size() && targets[j] == targets[i]) ++j;
        neighbors_[v].push_back({targets[i], static_cast<double>(j - i)});
        i = j;
      }
    }
  }

  std::size_t node_count() const { return neighbors_.size(); }
  const std::vector<std::pair<std::size_t, double>>& neighbors(std::size_t v) const { return neighbors_[v]; }

  /// Position of `c` in v's sorted neighbor list, or npos.
  std::size_t find(std::size_t v, std::size_t c) const {
    const auto& list = neighbors_[v];
    auto it = std::lower_bound(list.begin(), list.end(), c,
                               [](const auto& entry, std::size_t key) { return entry.first < key; });
    return it != list.end() && it->first == c ? static_cast<std::size_t>(it - list.begin())
                                              : static_cast<std::size_t>(-1);
  }

  /// Hop distance from t to c, for c a neighbor of some neighbor of t.
  int distance(std::size_t t, std::size_t c) const {
    if (t == c) return 0;
    return find(t, c) != static_cast<std::size_t>(-1) ? 1 : 2;
  }

 private:
  std::vector<std::vector<std::pair<std::size_t, double>>> neighbors_;
};

/// Second-order biased walker. With p = q = 1 the bias is identically 1 and
/// the walker reduces to first-order weighted sampling.
class BiasedWalker {
 public:
  BiasedWalker(const FlowGraph& graph, const WalkConfig& config)
      : adjacency_(graph), config_(config), first_order_(adjacency_.node_count()) {
    config.validate();
    for (std::size_t v = 0; v < adjacency_.node_count(); ++v) {
      std::vector<double> w;
      for (const auto& [c, weight] : adjacency_.neighbors(v)) w.push_back(weight);
      first_order_[v] = AliasTable(w);
    }
    if (config.p == 1.0 && config.q == 1.0) return;
    // One table per arrival edge t→v, indexed by t's position in v's list.
    second_order_.resize(adjacency_.node_count());
    for (std::size_t v = 0; v < adjacency_.node_count(); ++v) {
      for (const auto& [t, unused] : adjacency_.neighbors(v)) {
        std::vector<double> w;
        for (const auto& [c, weight] : adjacency_.neighbors(v)) {
          w.push_back(transition_weight(adjacency_.distance(t, c), config.p, config.q, weight));
        }
        second_order_[v].emplace_back(w);
      }
    }
  }

  const WeightedAdjacency& adjacency() const { return adjacency_; }

  std::vector<std::size_t> walk(std::size_t start, Rng& rng) const {
    std::vector<std::size_t> path{start};
    path.reserve(config_.walk_length);
    while (path.size() < config_.walk_length) {
      const std::size_t cur = path.back();
      const auto& nbrs = adjacency_.neighbors(cur);
      if (nbrs.empty()) break;
      std::size_t pick;
      if (path.size() == 1 || second_order_.empty()) {
        pick = first_order_[cur].sample(rng);
      } else {
        const std::size_t prev = path[path.size() - 2];
        pick = second_order_[cur][adjacency_.find(cur, prev)].sample(rng);
      }
      path.push_back(nbrs[pick].first);
    }
    return path;
  }

 private:
  WeightedAdjacency adjacency_;
  WalkConfig config_;
  std::vector<AliasTable> first_order_;
  std::vector<std::vector<AliasTable>> second_order_;
};

using Walk = std::vector<std::size_t>;

/// walks_per_node rounds; each round starts one walk from every node in
/// index order. Every walk has its own seed derived from (seed, node, round).
inline std::vector<Walk> generate_walks(const FlowGraph& graph, const WalkConfig& config) {
  if (graph.node_count() == 0) throw Error(ErrorCode::EmptyTable, "walks on empty graph");
  BiasedWalker walker(graph, config);
  const std::uint64_t base = derive_seed(config.seed, "walks");
  std::vector<Walk> walks;
  walks.reserve(graph.node_count() * config.walks_per_node);
  for (std::size_t round = 0; round < config.walks_per_node; ++round) {
    for (std::size_t v = 0; v < graph.node_count(); ++v) {
      Rng rng(derive_seed(base, round * graph.node_count() + v));
      walks.push_back(walker.walk(v, rng));
    }
  }
  return walks;
}

struct NodeEmbeddingTable {
  std::vector<std::string> node_ids;
  Matrix matrix;  // |V| × dim, row i ↔ node_ids[i]

  /// Rows re-ordered to match `graph`'s node indexing; every node of the
  /// graph must be present.
  Matrix aligned_to(const FlowGraph& graph) const {
    std::unordered_map<std::string, Eigen::Index> index;
    for (std::size_t i = 0; i < node_ids.size(); ++i) index.emplace(node_ids[i], static_cast<Eigen::Index>(i));
    Matrix out(static_cast<Eigen::Index>(graph.node_count()), matrix.cols());
    for (std::size_t v = 0; v < graph.node_count(); ++v) {
      auto it = index.find(graph.node_ids()[v]);
      if (it == index.end()) {
        throw Error(ErrorCode::MissingEmbeddings, "no embedding for node " + graph.node_ids()[v]);
      }
      out.row(static_cast<Eigen::Index>(v)) = matrix.row(it->second);
    }
    return out;
  }
};

namespace detail {
inline double sigmoid(double x) {
  x = std::clamp(x, -30.0, 30.0);
  return 1.0 / (1.0 + std::exp(-x));
}
}  // namespace detail

/// Skip-gram with negative sampling over node walks. Noise nodes are drawn
/// ∝ frequency^0.75; the learning rate decays linearly to 1e-4 of its
/// initial value over all epochs. Single-threaded, hence reproducible.
inline Matrix train_skipgram(const std::vector<Walk>& walks, std::size_t node_count,
                             const WalkConfig& config) {
  config.validate();
  std::size_t tokens = 0;
  for (const auto& w : walks) tokens += w.size();
  if (walks.empty() || tokens == 0) throw Error(ErrorCode::EmptyCorpus, "no walks to train on");

  const auto dim = static_cast<Eigen::Index>(config.dim);
  const auto n = static_cast<Eigen::Index>(node_count);
  Matrix input(n, dim);
  Matrix output = Matrix::Zero(n, dim);
  Rng init(derive_seed(config.seed, "skipgram-init"));
  const double bound = 0.5 / static_cast<double>(config.dim);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) input(i, j) = init.uniform(-bound, bound);

  std::vector<double> counts(node_count, 0.0);
  for (const auto& w : walks)
    for (auto v : w) counts[v] += 1.0;
  std::vector<double> noise_weights(node_count);
  for (std::size_t i = 0; i < node_count; ++i) noise_weights[i] = std::pow(counts[i], 0.75);
  const AliasTable noise(noise_weights);

  Rng rng(derive_seed(config.seed, "skipgram"));
  const double total_steps = static_cast<double>(config.epochs * tokens);
  double step = 0.0;
  RowVector grad_center(dim);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (const auto& walk : walks) {
      for (std::size_t i = 0; i < walk.size(); ++i, step += 1.0) {
        const double lr = config.learning_rate * std::max(1e-4, 1.0 - step / total_steps);
        const auto center = static_cast<Eigen::Index>(walk[i]);
        const std::size_t lo = i >= config.window ? i - config.window : 0;
        const std::size_t hi = std::min(walk.size() - 1, i + config.window);
        for (std::size_t j = lo; j <= hi; ++j) {
          if (j == i) continue;
          grad_center.setZero();
          const auto context = static_cast<Eigen::Index>(walk[j]);
          for (std::size_t k = 0; k <= config.negatives; ++k) {
            Eigen::Index target;
            double label;
            if (k == 0) {
              target = context;
              label = 1.0;
            } else {
              target = static_cast<Eigen::Index>(noise.sample(rng));
              if (target == context) continue;
              label = 0.0;
            }
            const double score = input.row(center).dot(output.row(target));
            const double g = (label - detail::sigmoid(score)) * lr;
            grad_center += g * output.row(target);
            output.row(target) += g * input.row(center);
          }
          input.row(center) += grad_center;
        }
      }
    }
  }
  return input;
}

/// Walks + skip-gram on `graph`; rows follow the graph's node indexing.
inline NodeEmbeddingTable node2vec(const FlowGraph& graph, const WalkConfig& config) {
  auto walks = generate_walks(graph, config);
  return {graph.node_ids(), train_skipgram(walks, graph.node_count(), config)};
}

inline void write_node_embeddings(std::ostream& out, const NodeEmbeddingTable& table) {
  std::vector<std::string> header{"node_id"};
  for (Eigen::Index j = 0; j < table.matrix.cols(); ++j) header.push_back("e" + std::to_string(j));
  csv::write_row(out, header);
  for (std::size_t i = 0; i < table.node_ids.size(); ++i) {
    std::vector<std::string> row{table.node_ids[i]};
    for (Eigen::Index j = 0; j < table.matrix.cols(); ++j)
      row.push_back(csv::format_double(table.matrix(static_cast<Eigen::Index>(i), j)));
    csv::write_row(out, row);
  }
}

}  // namespace steg
