#pragma once

#include <optional>
#include <string>

#include "jetflow/agent_set.hpp"
#include "jetflow/chain.hpp"

namespace jetflow {

/// Location and values of a violated defining inequality; plugging the
/// witness back into the inequality reproduces the violation.
struct Witness {
  Step step = -1;     // n, when the property is chain-level
  int i = -1;         // agent indices, when the inequality is entrywise
  int j = -1;
  AgentSet set_a;     // subsets, when the inequality is over cuts
  AgentSet set_b;
  double lhs = 0.0;
  double rhs = 0.0;
};

enum class CheckMethod { kExhaustive, kSampled };

struct PropertyCertificate {
  std::string property;
  bool holds = false;
  double bound = 0.0;  // delta, psi, gamma, or the pstar estimate
  std::optional<Witness> witness;
  CheckMethod method = CheckMethod::kExhaustive;
};

struct SubsetCheckOptions {
  enum class Mode { kAuto, kExhaustive, kSampled };
  Mode mode = Mode::kAuto;
  int samples = 2000;      // subset draws in sampled mode
  std::uint64_t seed = 0;  // sampling seed
  double tol = 1e-12;      // additive slack on the defining inequality
};

/// Exhaustive-enumeration caps; beyond them auto mode samples.
inline constexpr int kMaxExhaustiveCutBalance = 20;
inline constexpr int kMaxExhaustiveBalancedAsymmetry = 10;

/// min over n < T, i of A_ii(n); holds iff the minimum is positive.
PropertyCertificate self_confidence(const ChainSpec& spec, Step t);

/// Cut-balance: for every nonempty proper M1, inflow(M1) <= psi * outflow(M1).
PropertyCertificate check_cut_balance(const StochasticMatrix& a, double psi,
                                      const SubsetCheckOptions& opts = {});

/// Tightest psi for which check_cut_balance holds; +infinity when some
/// cut has inflow > 0 and outflow = 0. Exhaustive only (N <= 20).
double min_cut_balance(const StochasticMatrix& a);

/// Balanced asymmetry: for all equal-cardinality M1, M2,
/// sum_{i not in M1, j in M2} A_ij <= psi * sum_{i in M1, j not in M2} A_ij.
PropertyCertificate check_balanced_asymmetry(const StochasticMatrix& a,
                                             double psi,
                                             const SubsetCheckOptions& opts = {});

/// Weak aperiodicity: for all i != j there is l with A_li A_lj >= gamma A_ij.
PropertyCertificate check_weak_aperiodicity(const StochasticMatrix& a,
                                            double gamma, double tol = 1e-12);

/// min over {(i,j): i != j, A_ij > 0} of max_l A_li A_lj / A_ij;
/// +infinity when no such pair exists.
double max_weak_aperiodicity(const StochasticMatrix& a);

/// Finite-horizon lower-bound estimate of p*: the smallest component of
/// the backward absolute-probability approximation with uniform terminal,
/// over 0 <= n <= T. An estimator, not a certificate.
double pstar_estimate(const ChainSpec& spec, Step t);

}  // namespace jetflow
