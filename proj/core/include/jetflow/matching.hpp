#pragma once

#include <vector>

#include "jetflow/absprob.hpp"
#include "jetflow/agent_set.hpp"
#include "jetflow/chain.hpp"

namespace jetflow {

/// Self-confidence bound achievable after row permutation of a balanced
/// asymmetric matrix with bound psi: 4 / (psi N^2 + 4N - 4).
double delta_bound(double psi, int n);

/// tau maps each column i to the row tau[i] matched to it, so the
/// permutation matrix P with rows e_{tau[i]} gives (PA)_ii >= delta.
struct MatchingResult {
  std::vector<int> tau;
  double delta = 0.0;
  std::vector<double> matched_entries;  // A(tau[i], i)
};

/// No perfect matching above the entry threshold. The violator set K of
/// rows has fewer than |K| columns reachable through threshold edges,
/// which certifies the input was not balanced asymmetric with this bound.
class MatchingError : public Error {
 public:
  MatchingError(AgentSet violator, AgentSet image, double delta,
                Step step = -1)
      : Error("no perfect matching at entry threshold " +
              std::to_string(delta) +
              (step >= 0 ? " (chain step " + std::to_string(step) + ")" : "")),
        violator(violator), image(image), delta(delta), step(step) {}
  AgentSet violator;  // rows K
  AgentSet image;     // D(K), the columns K reaches
  double delta;
  Step step;          // -1 for single-matrix matching
};

/// Finds, via augmenting-path bipartite matching on edges A_ij >= delta,
/// a permutation tau with A(tau[i], i) >= delta for every i. Ties between
/// perfect matchings break to the lexicographically smallest tau.
MatchingResult self_confident_permutation(const StochasticMatrix& a,
                                          double psi);

/// B(n) = P(n) A(n) P^t(n-1) with P(-1) = I: a per-step row/column
/// renormalization of the chain whose every matrix has diagonal >= delta.
struct NormalizedChain {
  std::vector<StochasticMatrix> b;      // n = 0..T-1
  std::vector<std::vector<int>> perms;  // tau of P(n), n = 0..T-1
  double delta = 0.0;

  /// The realized B(n) sequence as a chain (repeat-last tail).
  ChainSpec b_chain() const {
    return ChainSpec::explicit_list(b, TailPolicy::kRepeatLast);
  }
};

NormalizedChain normalize_chain(const ChainSpec& spec, double psi, Step t);

/// Transports an absolute-probability approximation adapted to B(n) back
/// to the original chain: pi_A(n) = pi_B(n) P(n-1). Verifies the backward
/// residual against `spec` within 1e-9 and throws on failure.
AbsProbApprox pullback_abs_prob(const ChainSpec& spec,
                                const AbsProbApprox& pi_b,
                                const std::vector<std::vector<int>>& perms);

}  // namespace jetflow
