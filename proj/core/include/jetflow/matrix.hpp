#pragma once

#include <Eigen/Dense>

#include "jetflow/error.hpp"

namespace jetflow {

/// Default row-sum tolerance at construction.
inline constexpr double kRowSumTol = 1e-9;

/// Row-stochastic N x N update matrix. Entries are validated on
/// construction: nonnegative, each row summing to 1 within tolerance.
class StochasticMatrix {
 public:
  /// Validates and wraps `entries`; throws NegativeEntryError or
  /// RowSumError (0-based indices) on violation.
  static StochasticMatrix validated(Eigen::MatrixXd entries,
                                    double tol = kRowSumTol);

  static StochasticMatrix identity(int n) {
    return StochasticMatrix(Eigen::MatrixXd::Identity(n, n));
  }

  int size() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  const Eigen::MatrixXd& data() const { return m_; }

  bool operator==(const StochasticMatrix& o) const { return m_ == o.m_; }

 private:
  explicit StochasticMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {}
  Eigen::MatrixXd m_;
};

/// Spec-level entry point: validate a raw array as a stochastic matrix.
StochasticMatrix validate_stochastic(const Eigen::MatrixXd& entries,
                                     double tol = kRowSumTol);

}  // namespace jetflow
