#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "steg/csv.hpp"
#include "steg/error.hpp"
#include "steg/flow_ingest.hpp"
#include "steg/types.hpp"

namespace steg {

enum class Direction : std::uint8_t { Forward = 0, Reverse = 1 };

struct Edge {
  std::size_t src;
  std::size_t dst;
  std::size_t flow;  // source row index; also the row of FlowGraph::flow_features
  Direction direction;
};

struct Neighbor {
  std::size_t node;
  std::size_t edge;
  bool operator==(const Neighbor&) const = default;
};

/// Bidirectional flow multigraph. Nodes are endpoint ids; each flow row
/// contributes a forward and a reverse edge sharing one feature row.
class FlowGraph {
 public:
  std::size_t node_count() const { return node_ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t flow_count() const { return static_cast<std::size_t>(flow_features_.rows()); }
  std::size_t feature_dim() const { return static_cast<std::size_t>(flow_features_.cols()); }

  const std::vector<std::string>& node_ids() const { return node_ids_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Matrix& flow_features() const { return flow_features_; }

  /// Feature vector e_uv of an edge (both directions of a flow share it).
  auto edge_features(std::size_t edge) const {
    return flow_features_.row(static_cast<Eigen::Index>(edges_[edge].flow));
  }

  std::size_t node_index(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw Error(ErrorCode::InvalidNode, "unknown endpoint " + id);
    return it->second;
  }

  /// Forward edge of flow `flow`.
  std::size_t forward_edge(std::size_t flow) const { return 2 * flow; }

  /// Incoming edges of `v` in insertion order.
  std::span<const Neighbor> in_neighbors(std::size_t v) const {
    if (v >= node_count()) {
      throw Error(ErrorCode::InvalidNode,
                  "node " + std::to_string(v) + " out of range (" + std::to_string(node_count()) + ")");
    }
    return incoming_[v];
  }

  /// Same topology with per-flow features replaced.
  FlowGraph with_flow_features(Matrix features) const {
    if (static_cast<std::size_t>(features.rows()) != flow_count()) {
      throw Error(ErrorCode::DimensionMismatch, "replacement features have wrong row count");
    }
    FlowGraph g = *this;
    g.flow_features_ = std::move(features);
    return g;
  }

  /// Builds directly from endpoints and a feature matrix, one row per flow.
  /// `known_nodes` are registered first, in order, whether or not a flow
  /// touches them.
  static FlowGraph from_flows(const std::vector<std::pair<std::string, std::string>>& endpoints,
                              Matrix features, const std::vector<std::string>& known_nodes = {}) {
    if (endpoints.empty()) throw Error(ErrorCode::EmptyTable, "graph from empty table");
    if (static_cast<std::size_t>(features.rows()) != endpoints.size()) {
      throw Error(ErrorCode::DimensionMismatch, "one feature row per flow required");
    }
    FlowGraph g;
    g.flow_features_ = std::move(features);
    g.edges_.reserve(2 * endpoints.size());
    for (const auto& id : known_nodes) g.intern(id);
    for (std::size_t flow = 0; flow < endpoints.size(); ++flow) {
      const std::size_t u = g.intern(endpoints[flow].first);
      const std::size_t v = g.intern(endpoints[flow].second);
      g.add_edge({u, v, flow, Direction::Forward});
      g.add_edge({v, u, flow, Direction::Reverse});
    }
    return g;
  }

 private:
  std::size_t intern(const std::string& id) {
    auto [it, inserted] = index_.try_emplace(id, node_ids_.size());
    if (inserted) {
      node_ids_.push_back(id);
      incoming_.emplace_back();
    }
    return it->second;
  }

  void add_edge(const Edge& e) {
    incoming_[e.dst].push_back({e.src, edges_.size()});
    edges_.push_back(e);
  }

  std::vector<std::string> node_ids_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> incoming_;
  Matrix flow_features_;
};

inline FlowGraph build_graph(const FlowTable& table) {
  if (table.empty()) throw Error(ErrorCode::EmptyTable, "graph from empty table");
  if (!table.categorical_names.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "graph needs an encoded, numeric-only table");
  }
  std::vector<std::pair<std::string, std::string>> endpoints;
  endpoints.reserve(table.size());
  for (const auto& r : table.records) endpoints.emplace_back(r.src_id, r.dst_id);
  return FlowGraph::from_flows(endpoints, feature_matrix(table));
}

/// Debug dump: src, dst, row_index, direction.
inline void write_edge_list(std::ostream& out, const FlowGraph& graph) {
  csv::write_row(out, {"src", "dst", "row_index", "direction"});
  for (const auto& e : graph.edges()) {
    csv::write_row(out, {graph.node_ids()[e.src], graph.node_ids()[e.dst], std::to_string(e.flow),
                         e.direction == Direction::Forward ? "forward" : "reverse"});
  }
}

}  // namespace steg
