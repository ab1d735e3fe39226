#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "steg/error.hpp"
#include "steg/flow_graph.hpp"
#include "steg/random.hpp"
#include "steg/types.hpp"

namespace steg {

enum class InitMode { ConstantOnes, Node2Vec };
enum class Activation { Relu, Identity };

struct EncoderConfig {
  std::size_t layers = 1;
  std::size_t hidden = 256;
  Activation activation = Activation::Relu;
  InitMode init_mode = InitMode::ConstantOnes;
  std::uint64_t weight_seed = 0;

  void validate() const {
    if (layers < 1) throw Error(ErrorCode::InvalidConfig, "encoder needs at least one layer");
    if (hidden < 1) throw Error(ErrorCode::InvalidConfig, "hidden width must be >= 1");
  }
};

/// W^k, one hidden × fan_in matrix per layer. No biases.
struct EncoderWeights {
  std::vector<Matrix> layers;
};

/// Node and edge embeddings of one graph. Edge rows follow flow order;
/// row r holds [z_u ‖ z_v] for the forward edge of flow flow_index[r].
struct EmbeddingSet {
  Matrix nodes;
  Matrix edges;
  std::vector<std::size_t> flow_index;
};

/// h^0: all-ones rows as wide as the edge features, or the given Node2Vec
/// rows (already aligned to the graph's node indexing).
inline Matrix init_node_features(const FlowGraph& graph, InitMode mode,
                                 const std::optional<Matrix>& node2vec_rows = std::nullopt) {
  const auto n = static_cast<Eigen::Index>(graph.node_count());
  if (mode == InitMode::ConstantOnes) {
    return Matrix::Ones(n, static_cast<Eigen::Index>(graph.feature_dim()));
  }
  if (!node2vec_rows) throw Error(ErrorCode::MissingEmbeddings, "node2vec init needs an embedding table");
  if (node2vec_rows->rows() != n) {
    throw Error(ErrorCode::DimensionMismatch, "embedding table has " + std::to_string(node2vec_rows->rows()) +
                                                  " rows for " + std::to_string(n) + " nodes");
  }
  return *node2vec_rows;
}

/// Width of CONCAT(h_v, mean_u CONCAT(h_u, e_uv)).
inline std::size_t layer_fan_in(std::size_t node_dim, std::size_t edge_dim) {
  return 2 * node_dim + edge_dim;
}

/// Fan-in of every layer for the given h^0 and edge widths.
inline std::vector<std::size_t> layer_input_dims(const EncoderConfig& config, std::size_t node_dim,
                                                 std::size_t edge_dim) {
  std::vector<std::size_t> dims;
  for (std::size_t k = 0; k < config.layers; ++k) {
    dims.push_back(layer_fan_in(k == 0 ? node_dim : config.hidden, edge_dim));
  }
  return dims;
}

/// Glorot-uniform entries in ±sqrt(6 / (fan_in + fan_out)), one derived
/// seed per layer.
inline EncoderWeights init_weights(const EncoderConfig& config, std::span<const std::size_t> fan_ins) {
  config.validate();
  if (fan_ins.size() != config.layers) {
    throw Error(ErrorCode::DimensionMismatch, "one fan-in per layer required");
  }
  EncoderWeights weights;
  const auto rows = static_cast<Eigen::Index>(config.hidden);
  for (std::size_t k = 0; k < config.layers; ++k) {
    const auto cols = static_cast<Eigen::Index>(fan_ins[k]);
    const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
    Rng rng(derive_seed(config.weight_seed, k));
    Matrix w(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) w(i, j) = rng.uniform(-bound, bound);
    weights.layers.push_back(std::move(w));
  }
  return weights;
}

/// E-GraphSAGE forward pass with mean aggregation over full in-neighborhoods:
///   m_v   = mean_{uv ∈ E, head v} CONCAT(h_u^{k-1}, e_uv)   (zero if none)
///   h_v^k = σ(W^k · CONCAT(h_v^{k-1}, m_v))
/// then z_uv = CONCAT(z_u, z_v) for each flow's forward edge.
inline EmbeddingSet forward(const FlowGraph& graph, const Matrix& h0, const EncoderWeights& weights,
                            const EncoderConfig& config) {
  config.validate();
  if (weights.layers.size() != config.layers) {
    throw Error(ErrorCode::DimensionMismatch, "weights do not match layer count");
  }
  const auto n = static_cast<Eigen::Index>(graph.node_count());
  if (h0.rows() != n) throw Error(ErrorCode::DimensionMismatch, "h0 rows != node count");
  const auto edge_dim = static_cast<Eigen::Index>(graph.feature_dim());

  Matrix h = h0;
  for (std::size_t k = 0; k < config.layers; ++k) {
    const Matrix& w = weights.layers[k];
    const Eigen::Index node_dim = h.cols();
    const Eigen::Index fan_in = 2 * node_dim + edge_dim;
    if (w.cols() != fan_in) {
      throw Error(ErrorCode::DimensionMismatch,
                  "layer " + std::to_string(k + 1) + " expects fan-in " + std::to_string(w.cols()) +
                      ", inputs give " + std::to_string(fan_in));
    }
    Matrix input = Matrix::Zero(n, fan_in);
    input.leftCols(node_dim) = h;
    for (Eigen::Index v = 0; v < n; ++v) {
      const auto neighbors = graph.in_neighbors(static_cast<std::size_t>(v));
      if (neighbors.empty()) continue;
      auto message = input.row(v).segment(node_dim, node_dim + edge_dim);
      for (const auto& nb : neighbors) {
        message.head(node_dim) += h.row(static_cast<Eigen::Index>(nb.node));
        message.tail(edge_dim) += graph.edge_features(nb.edge);
      }
      message /= static_cast<double>(neighbors.size());
    }
    Matrix next = input * w.transpose();
    if (config.activation == Activation::Relu) next = next.cwiseMax(0.0);
    h = std::move(next);
  }

  EmbeddingSet out;
  const auto hidden = h.cols();
  const auto flows = static_cast<Eigen::Index>(graph.flow_count());
  out.edges.resize(flows, 2 * hidden);
  out.flow_index.resize(static_cast<std::size_t>(flows));
  for (Eigen::Index f = 0; f < flows; ++f) {
    const auto& e = graph.edges()[graph.forward_edge(static_cast<std::size_t>(f))];
    out.edges.row(f).head(hidden) = h.row(static_cast<Eigen::Index>(e.src));
    out.edges.row(f).tail(hidden) = h.row(static_cast<Eigen::Index>(e.dst));
    out.flow_index[static_cast<std::size_t>(f)] = e.flow;
  }
  out.nodes = std::move(h);
  return out;
}

}  // namespace steg
