#include <gtest/gtest.h>

#include <sstream>

#include <Eigen/Eigenvalues>

#include "steg/embedding_io.hpp"
#include "steg/projection.hpp"
#include "steg/random.hpp"

namespace {

using namespace steg;

StoredEmbeddings sample(Eigen::Index rows, Eigen::Index cols) {
  Rng rng(5);
  StoredEmbeddings e;
  e.values.resize(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    e.row_index.push_back(static_cast<std::uint64_t>(3 * i + 1));
    for (Eigen::Index j = 0; j < cols; ++j) e.values(i, j) = rng.normal() * 1e3;
  }
  return e;
}

TEST(EmbeddingIo, BinaryRoundTripIsExact) {
  const auto e = sample(17, 9);
  std::stringstream ss;
  write_embeddings(ss, e);
  const auto back = read_embeddings(ss);
  EXPECT_EQ(back.row_index, e.row_index);
  EXPECT_EQ(back.values, e.values);
}

TEST(EmbeddingIo, EmptyMatrixRoundTrips) {
  StoredEmbeddings e;
  e.values.resize(0, 4);
  std::stringstream ss;
  write_embeddings(ss, e);
  const auto back = read_embeddings(ss);
  EXPECT_EQ(back.values.rows(), 0);
  EXPECT_EQ(back.values.cols(), 4);
}

TEST(EmbeddingIo, RejectsForeignAndTruncatedFiles) {
  std::stringstream junk("not an embedding file at all");
  EXPECT_THROW(read_embeddings(junk), Error);
  std::stringstream ss;
  write_embeddings(ss, sample(4, 3));
  std::string bytes = ss.str();
  std::stringstream cut(bytes.substr(0, bytes.size() - 5));
  try {
    read_embeddings(cut);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::Io);
  }
}

TEST(EmbeddingIo, IndexCountMustMatchRows) {
  auto e = sample(4, 2);
  e.row_index.pop_back();
  std::stringstream ss;
  EXPECT_THROW(write_embeddings(ss, e), Error);
}

TEST(EmbeddingIo, CsvHasIndexThenColumns) {
  StoredEmbeddings e;
  e.row_index = {7};
  e.values.resize(1, 2);
  e.values << 0.5, -2;
  std::stringstream ss;
  write_embeddings_csv(ss, e);
  EXPECT_EQ(ss.str(), "row_index,e0,e1\n7,0.5,-2\n");
}

TEST(Projection, CollinearPointsHaveZeroSecondCoordinate) {
  Matrix x(3, 4);
  x << 1, 2, 3, 4,
       2, 4, 6, 8,
       -1, -2, -3, -4;
  const auto p = project_2d(x);
  ASSERT_EQ(p.points.rows(), 3);
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_NEAR(p.points(i, 1), 0.0, 1e-9);
  EXPECT_NEAR(p.explained_variance, 1.0, 1e-12);
}

TEST(Projection, RowCountPreserved) {
  Rng rng(2);
  Matrix x(50, 6);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
  EXPECT_EQ(project_2d(x).points.rows(), 50);
}

TEST(Projection, ExplainedVarianceIsTopTwoEigenShare) {
  Rng rng(8);
  Matrix x(2000, 5);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
  const Matrix centered = x.rowwise() - x.colwise().mean();
  const Matrix cov = centered.transpose() * centered / static_cast<double>(x.rows() - 1);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  const auto& lambda = eig.eigenvalues();  // ascending
  const double expected = (lambda(4) + lambda(3)) / lambda.sum();
  const auto p = project_2d(x);
  EXPECT_NEAR(p.explained_variance, expected, 1e-9);
  // Isotropic: roughly 2/5 of the variance.
  EXPECT_NEAR(p.explained_variance, 0.4, 0.05);
  // Coordinates carry the top variances.
  const Matrix pc = p.points.rowwise() - p.points.colwise().mean();
  EXPECT_NEAR(pc.col(0).squaredNorm() / 1999.0, lambda(4), 1e-9);
  EXPECT_NEAR(pc.col(1).squaredNorm() / 1999.0, lambda(3), 1e-9);
}

TEST(Projection, TooFewRows) {
  try {
    project_2d(Matrix::Ones(2, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewRows);
  }
}

TEST(Projection, CsvLayout) {
  Matrix x(3, 2);
  x << 0, 0, 1, 0, 0, 1;
  const auto p = project_2d(x);
  std::stringstream ss;
  write_projection(ss, p, {0, 1, 0});
  std::string line;
  std::getline(ss, line);
  EXPECT_EQ(line.rfind("# explained_variance=", 0), 0u);
  std::getline(ss, line);
  EXPECT_EQ(line, "x,y,label");
  int rows = 0;
  while (std::getline(ss, line)) ++rows;
  EXPECT_EQ(rows, 3);
  EXPECT_THROW(write_projection(ss, p, {0, 1}), Error);
}

}  // namespace
