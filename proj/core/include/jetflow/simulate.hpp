#pragma once

#include <vector>

#include "jetflow/chain.hpp"

namespace jetflow {

using StateVector = Eigen::VectorXd;

/// States, per-step spread max_i x_i - min_i x_i, and the sorted
/// rearrangement z(n) of every recorded state.
struct TrajectoryRecord {
  Step horizon = 0;
  std::vector<StateVector> states;         // n = 0..T
  std::vector<double> spread;              // n = 0..T
  std::vector<StateVector> sorted_states;  // nondecreasing per step
};

/// One update y = A x. Every y_i is a convex combination of x.
StateVector step_states(const StochasticMatrix& a, const StateVector& x);

TrajectoryRecord simulate(const ChainSpec& spec, const StateVector& x0, Step t);

}  // namespace jetflow
