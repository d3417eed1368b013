#include "jetflow/matrix.hpp"

#include <cmath>

namespace jetflow {

StochasticMatrix StochasticMatrix::validated(Eigen::MatrixXd entries,
                                             double tol) {
  if (entries.rows() != entries.cols() || entries.rows() < 1) {
    throw DimensionError("stochastic matrix must be square and nonempty");
  }
  if (tol <= 0) throw ParamError("row-sum tolerance must be positive");
  const int n = static_cast<int>(entries.rows());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = entries(i, j);
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw NegativeEntryError(i, j, v);
      }
    }
    const double dev = entries.row(i).sum() - 1.0;
    if (std::abs(dev) > tol) throw RowSumError(i, dev);
  }
  return StochasticMatrix(std::move(entries));
}

StochasticMatrix validate_stochastic(const Eigen::MatrixXd& entries,
                                     double tol) {
  return StochasticMatrix::validated(entries, tol);
}

}  // namespace jetflow
