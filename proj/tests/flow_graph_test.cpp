#include "steg/flow_graph.hpp"

#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "steg/random.hpp"

namespace steg {
namespace {

FlowTable flows(std::vector<std::pair<std::string, std::string>> pairs) {
  FlowTable t;
  t.numeric_names = {"a", "b"};
  double k = 0.0;
  for (auto& [s, d] : pairs) {
    t.records.push_back({s, d, {}, {0.5 + k, 0.1}, 0, ""});
    k += 1.0;
  }
  return t;
}

TEST(BuildGraph, SingleFlowIsBidirectional) {
  auto t = flows({{"A", "B"}});
  t.records[0].numerics = {0.5, 0.1};
  auto g = build_graph(t);
  EXPECT_EQ(g.node_count(), 2u);
  ASSERT_EQ(g.edge_count(), 2u);
  const auto& e = g.edges();
  EXPECT_EQ(g.node_ids()[e[0].src], "A");
  EXPECT_EQ(g.node_ids()[e[0].dst], "B");
  EXPECT_EQ(g.node_ids()[e[1].src], "B");
  EXPECT_EQ(g.node_ids()[e[1].dst], "A");
  EXPECT_EQ(e[1].direction, Direction::Reverse);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(g.edge_features(i)(0), 0.5);
    EXPECT_EQ(g.edge_features(i)(1), 0.1);
  }
}

TEST(BuildGraph, ParallelFlowsStayDistinct) {
  auto g = build_graph(flows({{"A", "B"}, {"A", "B"}, {"B", "C"}}));
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.edge_count(), 6u);
  const auto b = g.node_index("B");
  auto in = g.in_neighbors(b);
  ASSERT_EQ(in.size(), 3u);
  EXPECT_EQ(g.node_ids()[in[0].node], "A");
  EXPECT_EQ(g.node_ids()[in[1].node], "A");
  EXPECT_EQ(g.node_ids()[in[2].node], "C");
  EXPECT_NE(in[0].edge, in[1].edge);
  EXPECT_EQ(g.edges()[in[2].edge].direction, Direction::Reverse);
  EXPECT_EQ(g.edges()[in[2].edge].flow, 2u);
}

TEST(BuildGraph, SelfFlow) {
  auto g = build_graph(flows({{"A", "A"}}));
  EXPECT_EQ(g.node_count(), 1u);
  EXPECT_EQ(g.edge_count(), 2u);
  auto in = g.in_neighbors(0);
  ASSERT_EQ(in.size(), 2u);
  EXPECT_EQ(in[0].node, 0u);
}

TEST(BuildGraph, Errors) {
  EXPECT_THROW(build_graph(FlowTable{}), Error);
  auto g = build_graph(flows({{"A", "B"}}));
  try {
    g.in_neighbors(5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidNode);
  }
}

TEST(InNeighbors, IsolatedNodeHasNone) {
  Matrix features(1, 1);
  features(0, 0) = 1.0;
  auto g = FlowGraph::from_flows({{"A", "B"}}, features, {"Z"});
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.node_index("Z"), 0u);
  EXPECT_TRUE(g.in_neighbors(0).empty());
}

TEST(GraphProperties, DegreeSymmetryAndEdgeCount) {
  Rng rng(2);
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int i = 0; i < 200; ++i) {
    pairs.emplace_back("n" + std::to_string(rng.index(15)), "n" + std::to_string(rng.index(15)));
  }
  auto g = build_graph(flows(pairs));
  EXPECT_EQ(g.edge_count(), 400u);
  std::map<std::pair<std::size_t, std::size_t>, int> count;
  for (const auto& e : g.edges()) ++count[{e.src, e.dst}];
  for (const auto& [key, c] : count) EXPECT_EQ(c, (count[{key.second, key.first}]));
  std::size_t total = 0;
  for (std::size_t v = 0; v < g.node_count(); ++v) total += g.in_neighbors(v).size();
  EXPECT_EQ(total, g.edge_count());
}

TEST(GraphProperties, PermutedRowsGiveIsomorphicGraph) {
  std::vector<std::pair<std::string, std::string>> pairs{{"A", "B"}, {"C", "B"}, {"A", "C"}, {"D", "A"}};
  auto t = flows(pairs);
  auto permuted = t;
  std::reverse(permuted.records.begin(), permuted.records.end());
  auto g1 = build_graph(t);
  auto g2 = build_graph(permuted);
  ASSERT_EQ(g1.node_count(), g2.node_count());
  // Every flow keeps its endpoints and features after the relabeling.
  for (std::size_t f = 0; f < t.size(); ++f) {
    const auto& e1 = g1.edges()[g1.forward_edge(f)];
    const auto& e2 = g2.edges()[g2.forward_edge(t.size() - 1 - f)];
    EXPECT_EQ(g1.node_ids()[e1.src], g2.node_ids()[e2.src]);
    EXPECT_EQ(g1.node_ids()[e1.dst], g2.node_ids()[e2.dst]);
    EXPECT_TRUE(g1.edge_features(g1.forward_edge(f)) == g2.edge_features(g2.forward_edge(t.size() - 1 - f)));
  }
  for (const auto& id : g1.node_ids()) {
    EXPECT_EQ(g1.in_neighbors(g1.node_index(id)).size(), g2.in_neighbors(g2.node_index(id)).size());
  }
}

TEST(EdgeList, Dump) {
  auto g = build_graph(flows({{"A", "B"}}));
  std::ostringstream out;
  write_edge_list(out, g);
  EXPECT_EQ(out.str(), "src,dst,row_index,direction\nA,B,0,forward\nB,A,0,reverse\n");
}

}  // namespace
}  // namespace steg
