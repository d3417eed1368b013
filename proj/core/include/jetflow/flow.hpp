#pragma once

#include <optional>
#include <vector>

#include "jetflow/absprob.hpp"
#include "jetflow/agent_set.hpp"
#include "jetflow/chain.hpp"

namespace jetflow {

/// Time-indexed sequence of agent subsets J(n), stored over a finite
/// horizon plus a constant tail for n beyond it.
class Jet {
 public:
  /// Jet S: the same subset at every time.
  static Jet constant(AgentSet s) { return Jet({}, s); }

  Jet(std::vector<AgentSet> subsets, AgentSet tail)
      : subsets_(std::move(subsets)), tail_(tail) {}

  AgentSet at(Step n) const {
    const auto idx = static_cast<std::size_t>(n);
    return idx < subsets_.size() ? subsets_[idx] : tail_;
  }

  /// Last explicitly stored step (-1 when purely constant).
  Step stored_horizon() const { return static_cast<Step>(subsets_.size()) - 1; }
  AgentSet tail() const { return tail_; }

  bool proper_up_to(int agents, Step t) const {
    for (Step n = 0; n <= t; ++n) {
      if (!at(n).proper(agents)) return false;
    }
    return tail_.proper(agents);
  }

  /// Jet-limit: the tail subset, provided the sequence has become
  /// constant at some n <= t and stays equal to it.
  std::optional<AgentSet> limit(Step t) const {
    Step last_mismatch = -1;
    const Step upto = t < stored_horizon() ? t : stored_horizon();
    for (Step n = 0; n <= upto; ++n) {
      if (at(n) != tail_) last_mismatch = n;
    }
    if (last_mismatch < t) return tail_;
    return std::nullopt;
  }

 private:
  std::vector<AgentSet> subsets_;
  AgentSet tail_;
};

/// Cumulative symmetric cross-weights W_ij(T) = sum_{n<T} A_ij(n)+A_ji(n).
struct FlowGraph {
  Eigen::MatrixXd w;  // symmetric, zero diagonal
  Step horizon = 0;
};

/// Connected components of the flow graph thresholded at theta.
struct IslandPartition {
  std::vector<std::vector<int>> blocks;  // sorted by smallest member
  double theta = 0.0;
  Step horizon = 0;

  AgentSet block_set(std::size_t k) const {
    return AgentSet::from_indices(blocks[k]);
  }
};

FlowGraph flow_graph(const ChainSpec& spec, Step t);

IslandPartition islands(const ChainSpec& spec, Step t, double theta);

IslandPartition islands(const FlowGraph& graph, double theta);

/// One-step jet interaction
///   sum_{i in Js(n+1), j in Jk(n)} A_ij + sum_{i in Jk(n+1), j in Js(n)} A_ij.
/// The jets must be disjoint at each involved time.
double jet_interaction_step(const StochasticMatrix& a, AgentSet js_now,
                            AgentSet js_next, AgentSet jk_now,
                            AgentSet jk_next);

/// Partial sums U_hat(t) = sum_{n<t} U_n for t = 1..T.
std::vector<double> jet_interaction_total(const ChainSpec& spec, const Jet& js,
                                          const Jet& jk, Step t);

/// Partial sums V_hat(t) of the mass-weighted interaction built from the
/// joint flows r_ij(n) = pi_j(n+1) A_ji(n). Pointwise V_hat <= U_hat.
std::vector<double> jet_v_total(const ChainSpec& spec, const AbsProbApprox& pi,
                                const Jet& js, const Jet& jk, Step t);

struct LeaderReport {
  std::vector<double> influence;  // partial sums, t = 1..T
  double budget = 0.0;
  bool leader_at_horizon = false;
};

/// Cumulative influence of the jet's complement on the jet; the jet is a
/// leader at this horizon iff the total stays within budget.
LeaderReport is_leader(const ChainSpec& spec, const Jet& j, Step t,
                       double budget);

struct JetScanReport {
  AgentSet min_subset;
  double min_value = 0.0;
  std::uint64_t subsets_scanned = 0;
  Step horizon = 0;
};

/// Scans every constant proper subset S of M (or of the given island) and
/// reports the one minimizing the horizon-T interaction with its
/// complement. A finite-horizon probe of the flow necessary condition.
JetScanReport static_jet_flow_scan(const ChainSpec& spec, Step t,
                                   std::optional<AgentSet> within = {});

}  // namespace jetflow
