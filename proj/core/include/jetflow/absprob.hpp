#pragma once

#include <vector>

#include "jetflow/chain.hpp"

namespace jetflow {

/// Backward approximation of an absolute probability sequence:
/// pi(T) = terminal, pi^t(n) = pi^t(n+1) A(n). Every pi(n) is a
/// probability vector by construction.
struct AbsProbApprox {
  Step horizon = 0;
  std::vector<Eigen::VectorXd> pi;  // n = 0..T
  Eigen::VectorXd terminal;

  const Eigen::VectorXd& at(Step n) const {
    return pi[static_cast<std::size_t>(n)];
  }
};

/// Rows of P(n) with pi_i(n) below this mass are not pinned by the
/// duality relation and are set to uniform for reproducibility.
inline constexpr double kZeroMassThreshold = 1e-12;

/// Forward transition chain P(n) induced by pi, with the joint flows
/// r_ij(n) = pi_i(n) P_ij(n) = pi_j(n+1) A_ji(n).
struct ForwardChain {
  std::vector<StochasticMatrix> p;    // n = 0..T-1
  std::vector<Eigen::MatrixXd> rij;   // n = 0..T-1
};

AbsProbApprox backward_abs_prob(const ChainSpec& spec, Step t,
                                const Eigen::VectorXd& terminal);

/// Uniform-terminal convenience overload.
AbsProbApprox backward_abs_prob(const ChainSpec& spec, Step t);

/// P_ij(n) = pi_j(n+1) A_ji(n) / pi_i(n) for rows with mass; uniform rows
/// below kZeroMassThreshold. Satisfies pi^t(n) P(n) = pi^t(n+1).
StochasticMatrix forward_transition(const ChainSpec& spec,
                                    const AbsProbApprox& pi, Step n);

ForwardChain build_forward_chain(const ChainSpec& spec, const AbsProbApprox& pi);

/// r(n) as an N x N matrix; entries sum to 1.
Eigen::MatrixXd joint_flow(const AbsProbApprox& pi, const ForwardChain& fwd,
                           Step n);

struct DualityReport {
  double max_residual = 0.0;
  Step n = -1;  // location of the max residual
  int i = -1;
  int j = -1;
  bool pass = false;
};

/// Checks pi_i(n+1) A_ij(n) = pi_j(n) P_ji(n) over n < T, skipping
/// P-rows that carry mass <= kZeroMassThreshold. Passes iff the max
/// residual is <= 1e-8.
DualityReport check_duality(const ChainSpec& spec, const AbsProbApprox& pi,
                            const ForwardChain& fwd, Step t);

}  // namespace jetflow
