#include "steg/encoder.hpp"

#include <vector>

#include <gtest/gtest.h>

#include "steg/random.hpp"

namespace steg {
namespace {

using Dense = std::vector<std::vector<double>>;

// Brute-force layer from an adjacency tensor: count[v][u] incoming edges
// u→v, esum[v] the summed features of v's incoming edges.
Dense oracle_layer(const FlowGraph& g, const Dense& h, const Matrix& w, bool relu) {
  const std::size_t n = g.node_count();
  const std::size_t dh = h.empty() ? 0 : h[0].size();
  const std::size_t de = g.feature_dim();
  Dense count(n, std::vector<double>(n, 0.0));
  Dense esum(n, std::vector<double>(de, 0.0));
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const auto& e = g.edges()[i];
    count[e.dst][e.src] += 1.0;
    for (std::size_t j = 0; j < de; ++j) esum[e.dst][j] += g.flow_features()(static_cast<Eigen::Index>(e.flow), j);
  }
  Dense out(n, std::vector<double>(static_cast<std::size_t>(w.rows()), 0.0));
  for (std::size_t v = 0; v < n; ++v) {
    double deg = 0.0;
    for (std::size_t u = 0; u < n; ++u) deg += count[v][u];
    std::vector<double> x(2 * dh + de, 0.0);
    for (std::size_t j = 0; j < dh; ++j) x[j] = h[v][j];
    if (deg > 0) {
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t j = 0; j < dh; ++j) x[dh + j] += count[v][u] * h[u][j] / deg;
      for (std::size_t j = 0; j < de; ++j) x[2 * dh + j] = esum[v][j] / deg;
    }
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      double s = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) s += w(r, static_cast<Eigen::Index>(j)) * x[j];
      out[v][static_cast<std::size_t>(r)] = relu ? std::max(0.0, s) : s;
    }
  }
  return out;
}

FlowGraph random_graph(std::uint64_t seed, std::size_t nodes, std::size_t flows, std::size_t dim) {
  Rng rng(seed);
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<std::string> known;
  for (std::size_t i = 0; i < nodes; ++i) known.push_back("n" + std::to_string(i));
  for (std::size_t f = 0; f < flows; ++f) {
    pairs.emplace_back(known[rng.index(nodes)], known[rng.index(nodes)]);
  }
  Matrix x(static_cast<Eigen::Index>(flows), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = rng.uniform(-1.0, 1.0);
  return FlowGraph::from_flows(pairs, x, known);
}

Matrix random_matrix(std::uint64_t seed, Eigen::Index r, Eigen::Index c) {
  Rng rng(seed);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
  return m;
}

Dense to_dense(const Matrix& m) {
  Dense d(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) d[static_cast<std::size_t>(i)].push_back(m(i, j));
  return d;
}

TEST(InitNodeFeatures, ConstantOnesMatchesEdgeWidth) {
  auto g = random_graph(1, 4, 6, 7);
  auto h = init_node_features(g, InitMode::ConstantOnes);
  EXPECT_EQ(h.rows(), 4);
  EXPECT_EQ(h.cols(), 7);
  EXPECT_TRUE((h.array() == 1.0).all());

  Matrix x = Matrix::Zero(1, 39 + 204);
  auto steg_graph = FlowGraph::from_flows({{"a", "b"}}, x);
  EXPECT_EQ(init_node_features(steg_graph, InitMode::ConstantOnes).cols(), 243);

  EXPECT_EQ(init_node_features(FlowGraph{}, InitMode::ConstantOnes).rows(), 0);
}

TEST(InitNodeFeatures, Node2VecRows) {
  auto g = random_graph(2, 3, 4, 5);
  Matrix n2v = random_matrix(3, 3, 64);
  auto h = init_node_features(g, InitMode::Node2Vec, n2v);
  EXPECT_EQ(h.cols(), 64);
  EXPECT_TRUE(h == n2v);
  try {
    init_node_features(g, InitMode::Node2Vec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingEmbeddings);
  }
  EXPECT_THROW(init_node_features(g, InitMode::Node2Vec, Matrix(Matrix::Zero(2, 64))), Error);
}

TEST(InitWeights, ShapeBoundsAndDeterminism) {
  EncoderConfig c;
  c.weight_seed = 17;
  std::vector<std::size_t> fan{522};
  auto w = init_weights(c, fan);
  ASSERT_EQ(w.layers.size(), 1u);
  EXPECT_EQ(w.layers[0].rows(), 256);
  EXPECT_EQ(w.layers[0].cols(), 522);
  const double bound = std::sqrt(6.0 / (256 + 522));
  EXPECT_LE(w.layers[0].cwiseAbs().maxCoeff(), bound);
  EXPECT_GT(w.layers[0].cwiseAbs().maxCoeff(), 0.9 * bound);
  EXPECT_TRUE(w.layers[0] == init_weights(c, fan).layers[0]);
  c.weight_seed = 18;
  EXPECT_FALSE(w.layers[0] == init_weights(c, fan).layers[0]);
  EXPECT_THROW(init_weights(c, std::vector<std::size_t>{1, 2}), Error);
}

TEST(InitWeights, LayerDims) {
  EncoderConfig c;
  EXPECT_EQ(layer_input_dims(c, 243, 243), (std::vector<std::size_t>{729}));
  c.hidden = 128;
  c.layers = 2;
  EXPECT_EQ(layer_input_dims(c, 64, 39), (std::vector<std::size_t>{167, 295}));
  c.layers = 0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Forward, TwoNodeHandComputed) {
  // A→B with e = [1]; h0 = ones(1). W picks [h_v, mean h_u, mean e].
  auto g = FlowGraph::from_flows({{"A", "B"}}, Matrix::Constant(1, 1, 1.0));
  EncoderConfig c;
  c.hidden = 3;
  c.activation = Activation::Identity;
  EncoderWeights w{{Matrix::Identity(3, 3)}};
  auto out = forward(g, init_node_features(g, InitMode::ConstantOnes), w, c);
  // Each node has one in-edge from the other, so h1 = [1, 1, 1].
  EXPECT_TRUE(out.nodes.isApprox(Matrix::Ones(2, 3)));
  ASSERT_EQ(out.edges.rows(), 1);
  EXPECT_EQ(out.edges.cols(), 6);
  EXPECT_EQ(out.flow_index, (std::vector<std::size_t>{0}));

  // Isolated node keeps only its own state.
  auto g2 = FlowGraph::from_flows({{"A", "B"}}, Matrix::Constant(1, 1, 2.0), {"Z"});
  Matrix h0(3, 1);
  h0 << 5.0, 1.0, 3.0;
  auto out2 = forward(g2, h0, w, c);
  EXPECT_EQ(out2.nodes.row(0), (RowVector(3) << 5.0, 0.0, 0.0).finished());
  EXPECT_EQ(out2.nodes.row(1), (RowVector(3) << 1.0, 3.0, 2.0).finished());
}

class OracleSweep : public ::testing::TestWithParam<int> {};

TEST_P(OracleSweep, MatchesDenseOracle) {
  const auto seed = static_cast<std::uint64_t>(GetParam());
  Rng sizes(seed);
  const std::size_t nodes = 1 + sizes.index(5);
  const std::size_t flows = 1 + sizes.index(8);
  auto g = random_graph(seed * 31 + 1, nodes, flows, 3);
  EncoderConfig c;
  c.hidden = 4;
  c.layers = 1 + seed % 2;
  c.activation = seed % 3 == 0 ? Activation::Identity : Activation::Relu;
  c.weight_seed = seed;
  Matrix h0 = random_matrix(seed + 100, static_cast<Eigen::Index>(nodes), 2);
  auto w = init_weights(c, layer_input_dims(c, 2, 3));
  auto out = forward(g, h0, w, c);

  Dense h = to_dense(h0);
  for (const auto& wk : w.layers) h = oracle_layer(g, h, wk, c.activation == Activation::Relu);
  for (std::size_t v = 0; v < nodes; ++v)
    for (std::size_t j = 0; j < 4; ++j)
      EXPECT_NEAR(out.nodes(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(j)), h[v][j], 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Graphs, OracleSweep, ::testing::Range(0, 24));

TEST(Forward, ConcatContract) {
  auto g = random_graph(9, 20, 60, 5);
  EncoderConfig c;
  c.hidden = 8;
  auto w = init_weights(c, layer_input_dims(c, 5, 5));
  auto out = forward(g, init_node_features(g, InitMode::ConstantOnes), w, c);
  ASSERT_EQ(out.edges.rows(), 60);
  for (Eigen::Index f = 0; f < 60; ++f) {
    const auto& e = g.edges()[g.forward_edge(static_cast<std::size_t>(f))];
    EXPECT_TRUE(out.edges.row(f).head(8) == out.nodes.row(static_cast<Eigen::Index>(e.src)));
    EXPECT_TRUE(out.edges.row(f).tail(8) == out.nodes.row(static_cast<Eigen::Index>(e.dst)));
  }
  EXPECT_GE(out.edges.minCoeff(), 0.0);
  EXPECT_TRUE(out.edges.allFinite());
}

TEST(Forward, RelabelingEquivariance) {
  auto g = random_graph(4, 10, 30, 3);
  // Same flows, nodes registered in reverse order.
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t f = 0; f < g.flow_count(); ++f) {
    const auto& e = g.edges()[g.forward_edge(f)];
    pairs.emplace_back(g.node_ids()[e.src], g.node_ids()[e.dst]);
  }
  std::vector<std::string> reversed(g.node_ids().rbegin(), g.node_ids().rend());
  auto g2 = FlowGraph::from_flows(pairs, g.flow_features(), reversed);

  EncoderConfig c;
  c.hidden = 6;
  Matrix h0 = random_matrix(8, 10, 4);
  Matrix h0_perm(10, 4);
  for (std::size_t v = 0; v < 10; ++v) {
    h0_perm.row(static_cast<Eigen::Index>(g2.node_index(g.node_ids()[v]))) = h0.row(static_cast<Eigen::Index>(v));
  }
  auto w = init_weights(c, layer_input_dims(c, 4, 3));
  auto a = forward(g, h0, w, c);
  auto b = forward(g2, h0_perm, w, c);
  for (std::size_t v = 0; v < 10; ++v) {
    const auto v2 = static_cast<Eigen::Index>(g2.node_index(g.node_ids()[v]));
    EXPECT_LT((a.nodes.row(static_cast<Eigen::Index>(v)) - b.nodes.row(v2)).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_LT((a.edges - b.edges).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Forward, MeanMessageWithinContributingRange) {
  // With W selecting the message block, the identity-activation output is
  // the message itself.
  auto g = random_graph(12, 6, 15, 2);
  Matrix h0 = random_matrix(13, 6, 2);
  EncoderConfig c;
  c.hidden = 4;
  c.activation = Activation::Identity;
  Matrix w = Matrix::Zero(4, 6);
  w.rightCols(4) = Matrix::Identity(4, 4);
  auto out = forward(g, h0, EncoderWeights{{w}}, c);
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    const auto in = g.in_neighbors(v);
    if (in.empty()) continue;
    for (Eigen::Index j = 0; j < 4; ++j) {
      double lo = 1e300, hi = -1e300;
      for (const auto& nb : in) {
        const double x = j < 2 ? h0(static_cast<Eigen::Index>(nb.node), j) : g.edge_features(nb.edge)(j - 2);
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
      const double m = out.nodes(static_cast<Eigen::Index>(v), j);
      EXPECT_GE(m, lo - 1e-12);
      EXPECT_LE(m, hi + 1e-12);
    }
  }
}

TEST(Forward, ZeroInputsGiveZero) {
  auto g = FlowGraph::from_flows({{"a", "b"}, {"b", "c"}}, Matrix::Zero(2, 3));
  EncoderConfig c;
  c.hidden = 5;
  c.activation = Activation::Identity;
  auto w = init_weights(c, layer_input_dims(c, 3, 3));
  auto out = forward(g, Matrix::Zero(3, 3), w, c);
  EXPECT_TRUE(out.nodes.isZero(0.0));
  EXPECT_TRUE(out.edges.isZero(0.0));
}

TEST(Forward, PaperWidths) {
  auto g = FlowGraph::from_flows({{"a", "b"}, {"b", "c"}}, random_matrix(1, 2, 243));
  EncoderConfig steg_cfg;
  auto out = forward(g, init_node_features(g, InitMode::ConstantOnes),
                     init_weights(steg_cfg, layer_input_dims(steg_cfg, 243, 243)), steg_cfg);
  EXPECT_EQ(out.edges.cols(), 512);

  auto g2 = FlowGraph::from_flows({{"a", "b"}, {"b", "c"}}, random_matrix(2, 2, 39));
  EncoderConfig n2v_cfg;
  n2v_cfg.hidden = 128;
  n2v_cfg.init_mode = InitMode::Node2Vec;
  auto out2 = forward(g2, random_matrix(3, 3, 64), init_weights(n2v_cfg, layer_input_dims(n2v_cfg, 64, 39)),
                      n2v_cfg);
  EXPECT_EQ(out2.edges.cols(), 256);
}

TEST(Forward, DimensionMismatch) {
  auto g = FlowGraph::from_flows({{"a", "b"}}, Matrix::Zero(1, 3));
  EncoderConfig c;
  c.hidden = 2;
  auto w = init_weights(c, std::vector<std::size_t>{7});
  try {
    forward(g, Matrix::Ones(2, 3), w, c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
  EXPECT_THROW(forward(g, Matrix::Ones(3, 3), init_weights(c, std::vector<std::size_t>{9}), c), Error);
}

}  // namespace
}  // namespace steg
