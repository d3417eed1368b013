#include "jetflow/simulate.hpp"

#include <algorithm>

namespace jetflow {

StateVector step_states(const StochasticMatrix& a, const StateVector& x) {
  if (a.size() != x.size()) {
    throw DimensionError("state vector length does not match matrix size");
  }
  return a.data() * x;
}

TrajectoryRecord simulate(const ChainSpec& spec, const StateVector& x0, Step t) {
  if (t < 0) throw ParamError("horizon must be nonnegative");
  if (x0.size() != spec.agents()) {
    throw DimensionError("initial state length does not match agent count");
  }
  TrajectoryRecord rec;
  rec.horizon = t;
  rec.states.reserve(static_cast<std::size_t>(t) + 1);
  rec.spread.reserve(static_cast<std::size_t>(t) + 1);
  rec.sorted_states.reserve(static_cast<std::size_t>(t) + 1);

  StateVector x = x0;
  for (Step n = 0; n <= t; ++n) {
    rec.states.push_back(x);
    rec.spread.push_back(x.maxCoeff() - x.minCoeff());
    StateVector z = x;
    std::sort(z.data(), z.data() + z.size());
    rec.sorted_states.push_back(std::move(z));
    if (n < t) x = step_states(spec.at(n), x);
  }
  return rec;
}

}  // namespace jetflow
