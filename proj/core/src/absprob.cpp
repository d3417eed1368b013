#include "jetflow/absprob.hpp"

#include <cmath>

namespace jetflow {

AbsProbApprox backward_abs_prob(const ChainSpec& spec, Step t,
                                const Eigen::VectorXd& terminal) {
  const int n = spec.agents();
  if (terminal.size() != n) {
    throw DimensionError("terminal vector length does not match agent count");
  }
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (terminal(i) < 0) throw ParamError("terminal vector has negative mass");
    sum += terminal(i);
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ParamError("terminal vector does not sum to 1");
  }
  if (t < 0) throw ParamError("horizon must be nonnegative");

  AbsProbApprox out;
  out.horizon = t;
  out.terminal = terminal;
  out.pi.assign(static_cast<std::size_t>(t) + 1, Eigen::VectorXd());
  out.pi[static_cast<std::size_t>(t)] = terminal;
  for (Step k = t - 1; k >= 0; --k) {
    const Eigen::MatrixXd a = spec.at(k).data();
    out.pi[static_cast<std::size_t>(k)] =
        (out.pi[static_cast<std::size_t>(k + 1)].transpose() * a).transpose();
  }
  return out;
}

AbsProbApprox backward_abs_prob(const ChainSpec& spec, Step t) {
  const int n = spec.agents();
  return backward_abs_prob(
      spec, t, Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

StochasticMatrix forward_transition(const ChainSpec& spec,
                                    const AbsProbApprox& pi, Step n) {
  if (n < 0 || n >= pi.horizon) {
    throw ParamError("forward transition step must satisfy 0 <= n < T");
  }
  const int size = spec.agents();
  const Eigen::MatrixXd a = spec.at(n).data();
  const Eigen::VectorXd& now = pi.at(n);
  const Eigen::VectorXd& next = pi.at(n + 1);
  Eigen::MatrixXd p(size, size);
  for (int i = 0; i < size; ++i) {
    if (now(i) > kZeroMassThreshold) {
      for (int j = 0; j < size; ++j) p(i, j) = next(j) * a(j, i) / now(i);
    } else {
      p.row(i).setConstant(1.0 / static_cast<double>(size));
    }
  }
  return StochasticMatrix::validated(std::move(p), 1e-9);
}

ForwardChain build_forward_chain(const ChainSpec& spec,
                                 const AbsProbApprox& pi) {
  ForwardChain fwd;
  fwd.p.reserve(static_cast<std::size_t>(pi.horizon));
  fwd.rij.reserve(static_cast<std::size_t>(pi.horizon));
  for (Step n = 0; n < pi.horizon; ++n) {
    fwd.p.push_back(forward_transition(spec, pi, n));
    const Eigen::MatrixXd& p = fwd.p.back().data();
    fwd.rij.push_back(pi.at(n).asDiagonal() * p);
  }
  return fwd;
}

Eigen::MatrixXd joint_flow(const AbsProbApprox& pi, const ForwardChain& fwd,
                           Step n) {
  if (n < 0 || n >= static_cast<Step>(fwd.p.size())) {
    throw ParamError("joint flow step must satisfy 0 <= n < T");
  }
  return pi.at(n).asDiagonal() * fwd.p[static_cast<std::size_t>(n)].data();
}

DualityReport check_duality(const ChainSpec& spec, const AbsProbApprox& pi,
                            const ForwardChain& fwd, Step t) {
  if (t > pi.horizon || t > static_cast<Step>(fwd.p.size())) {
    throw ParamError("duality horizon exceeds available data");
  }
  const int size = spec.agents();
  DualityReport rep;
  for (Step n = 0; n < t; ++n) {
    const Eigen::MatrixXd a = spec.at(n).data();
    const Eigen::MatrixXd& p = fwd.p[static_cast<std::size_t>(n)].data();
    const Eigen::VectorXd& now = pi.at(n);
    const Eigen::VectorXd& next = pi.at(n + 1);
    for (int j = 0; j < size; ++j) {
      if (now(j) <= kZeroMassThreshold) continue;  // arbitrary P-row
      for (int i = 0; i < size; ++i) {
        const double res = std::abs(next(i) * a(i, j) - now(j) * p(j, i));
        if (res > rep.max_residual) {
          rep.max_residual = res;
          rep.n = n;
          rep.i = i;
          rep.j = j;
        }
      }
    }
  }
  rep.pass = rep.max_residual <= 1e-8;
  return rep;
}

}  // namespace jetflow
