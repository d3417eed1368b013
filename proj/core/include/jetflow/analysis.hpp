#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jetflow/flow.hpp"
#include "jetflow/simulate.hpp"

namespace jetflow {

/// Row-group clusters of a backward product, with estimated per-cluster
/// limits (under a canonical ramp probe) and backward-mass estimates.
struct ClusterReport {
  std::vector<std::vector<int>> clusters;  // partition of M, sorted blocks
  std::vector<double> limits;              // X*_k estimate per cluster
  std::vector<double> masses;              // pi*_k estimate per cluster
  double residual = 0.0;                   // max within-cluster disagreement
  Step mass_eval_step = 0;                 // where the masses were read
};

enum class Verdict { kErgodic, kClassErgodic, kInconclusive };

std::string to_string(Verdict v);

/// Cumulative mass-weighted flow between two jets of the decomposition.
struct CrossFlowSeries {
  int jet_a = 0;  // jet ids; 0 is J^0
  int jet_b = 0;
  std::vector<double> partial;  // t = 1..T
};

/// Finite-horizon image of a jet decomposition: J^0 plus c value jets,
/// their mass series, pairwise cross-flows, and a verdict. Verdicts are
/// horizon evidence, never asymptotic claims; non-convergent chains come
/// back inconclusive.
struct DecompositionReport {
  std::vector<Jet> jets;  // jets[0] = J^0 (possibly empty), jets[1..c]
  int cluster_count = 0;  // c
  std::vector<CrossFlowSeries> cross_flows;
  Verdict verdict = Verdict::kInconclusive;
  std::vector<std::vector<double>> jet_mass_series;  // per jet, n = 0..T
  std::vector<double> jet_masses;                    // at mass_eval_step
  Step mass_eval_step = 0;
  double row_change_residual = 0.0;  // trailing-window product movement
  std::optional<IslandPartition> island_partition;
  bool clusters_match_islands = false;
};

/// Groups agents by backward-product row proximity: i, j share a class
/// when their rows of A(T)...A(n0) differ by at most eps in sup norm
/// (transitive closure). Limits apply cluster-averaged rows to the ramp
/// probe (0, 1, ..., N-1); masses read the backward absolute-probability
/// approximation at mid-horizon.
ClusterReport ergodic_classes(const ChainSpec& spec, Step t, double eps,
                              Step n0 = 0);

/// Horizon verdict from product clustering plus a trailing-window Cauchy
/// test, cross-checked against the islands at threshold theta.
DecompositionReport classify(const ChainSpec& spec, Step t, double eps,
                             double theta);

struct DsResult {
  DecompositionReport decomposition;
  ClusterReport clusters;
};

/// Probe-trajectory decomposition: simulates the N unit vectors plus
/// seeded random probes, clusters agents by terminal probe values, tracks
/// the nearest-cluster assignment through time as the jets, and sends to
/// J^0 the agents that fail the trailing Cauchy test or whose assignment
/// is still moving in the final quarter.
DsResult ds_decompose(const ChainSpec& spec, Step t, double eps, int probes,
                      std::uint64_t seed);

struct SortedConvergenceReport {
  std::vector<double> oscillation;  // per rank, over the last quarter
  double max_oscillation = 0.0;
  bool pass = false;
};

/// Tail oscillation of the sorted states z(n) against z(T).
SortedConvergenceReport sorted_state_convergence(const TrajectoryRecord& traj,
                                                 double eps);

}  // namespace jetflow
