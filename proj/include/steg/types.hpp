#pragma once

#include <Eigen/Dense>

namespace steg {

/// Row-major so that one row is one flow / one sample.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

}  // namespace steg
