#pragma once

#include <ostream>
#include <vector>

#include "steg/csv.hpp"
#include "steg/detectors.hpp"
#include "steg/error.hpp"
#include "steg/types.hpp"

namespace steg {

struct Projection {
  Matrix points;                     // n × 2
  double explained_variance = 0.0;   // (λ1 + λ2) / Σλ
};

/// Top-2 principal-component coordinates. A missing second component
/// (rank-1 data) projects to y = 0.
inline Projection project_2d(const Matrix& x) {
  if (x.rows() < 3) throw Error(ErrorCode::TooFewRows, "projection needs at least 3 rows");
  const PcaBasis basis = PcaBasis::fit(x);
  Projection p;
  p.points = Matrix::Zero(x.rows(), 2);
  const Eigen::Index k = std::min<Eigen::Index>(2, basis.axes.cols());
  if (k > 0) p.points.leftCols(k) = (x.rowwise() - basis.mean) * basis.axes.leftCols(k);
  const RowVector mean = x.colwise().mean();
  const double total = (x.rowwise() - mean).squaredNorm() / static_cast<double>(x.rows() - 1);
  p.explained_variance = total > 0.0 ? basis.variances.head(k).sum() / total : 0.0;
  return p;
}

/// CSV (x, y, label) preceded by a "# explained_variance=" comment line.
inline void write_projection(std::ostream& out, const Projection& p, const std::vector<int>& labels) {
  if (labels.size() != static_cast<std::size_t>(p.points.rows())) {
    throw Error(ErrorCode::LengthMismatch, "one label per projected row required");
  }
  out << "# explained_variance=" << csv::format_double(p.explained_variance) << '\n';
  csv::write_row(out, {"x", "y", "label"});
  for (Eigen::Index i = 0; i < p.points.rows(); ++i) {
    csv::write_row(out, {csv::format_double(p.points(i, 0)), csv::format_double(p.points(i, 1)),
                         std::to_string(labels[static_cast<std::size_t>(i)])});
  }
}

}  // namespace steg
