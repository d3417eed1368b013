#include "jetflow/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "jetflow/absprob.hpp"
#include "jetflow/rng.hpp"

namespace jetflow {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kErgodic:
      return "ergodic";
    case Verdict::kClassErgodic:
      return "class-ergodic";
    case Verdict::kInconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

namespace {

// Generator chains pay per-step sampling and verification costs;
// realizing each step once and reusing the explicit list keeps the
// multi-pass analyses linear in T.
ChainSpec materialize(const ChainSpec& spec, Step steps) {
  if (spec.kind() != ChainSpec::Kind::kGenerator) return spec;
  const auto n2 = static_cast<double>(spec.agents()) * spec.agents();
  if (static_cast<double>(steps) * n2 > 8e6) return spec;
  std::vector<StochasticMatrix> mats;
  mats.reserve(static_cast<std::size_t>(steps));
  for (Step n = 0; n < steps; ++n) mats.push_back(spec.at(n));
  return ChainSpec::explicit_list(std::move(mats), TailPolicy::kRepeatLast);
}

// Union-find grouping; blocks come out sorted by smallest member.
template <typename Pred>
std::vector<std::vector<int>> group_agents(int n, Pred&& related) {
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (related(i, j)) parent[static_cast<std::size_t>(find(i))] = find(j);
    }
  }
  std::vector<std::vector<int>> by_root(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) by_root[static_cast<std::size_t>(find(i))].push_back(i);
  std::vector<std::vector<int>> blocks;
  for (auto& blk : by_root) {
    if (!blk.empty()) blocks.push_back(std::move(blk));
  }
  std::sort(blocks.begin(), blocks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return blocks;
}

std::vector<std::vector<int>> cluster_product_rows(const Eigen::MatrixXd& prod,
                                                   double eps) {
  const int n = static_cast<int>(prod.rows());
  return group_agents(n, [&](int i, int j) {
    return (prod.row(i) - prod.row(j)).cwiseAbs().maxCoeff() <= eps;
  });
}

double within_cluster_residual(const Eigen::MatrixXd& prod,
                               const std::vector<std::vector<int>>& clusters) {
  double worst = 0.0;
  for (const auto& cluster : clusters) {
    for (std::size_t a = 0; a < cluster.size(); ++a) {
      for (std::size_t b = a + 1; b < cluster.size(); ++b) {
        worst = std::max(worst, (prod.row(cluster[a]) - prod.row(cluster[b]))
                                    .cwiseAbs()
                                    .maxCoeff());
      }
    }
  }
  return worst;
}

Eigen::VectorXd ramp_probe(int n) {
  Eigen::VectorXd probe(n);
  for (int i = 0; i < n; ++i) probe(i) = static_cast<double>(i);
  return probe;
}

// V-series between jets under r_ij(n) = pi_j(n+1) A_ji(n), one chain
// pass for all pairs.
std::vector<CrossFlowSeries> cross_flow_series(const ChainSpec& spec,
                                               const AbsProbApprox& pi,
                                               const std::vector<Jet>& jets,
                                               Step t) {
  const int n_agents = spec.agents();
  std::vector<CrossFlowSeries> series;
  for (std::size_t a = 0; a < jets.size(); ++a) {
    for (std::size_t b = a + 1; b < jets.size(); ++b) {
      CrossFlowSeries cf;
      cf.jet_a = static_cast<int>(a);
      cf.jet_b = static_cast<int>(b);
      cf.partial.reserve(static_cast<std::size_t>(t));
      series.push_back(std::move(cf));
    }
  }
  std::vector<double> acc(series.size(), 0.0);
  for (Step n = 0; n < t; ++n) {
    const Eigen::MatrixXd a = spec.at(n).data();
    const Eigen::VectorXd& next = pi.at(n + 1);
    std::size_t idx = 0;
    for (std::size_t s = 0; s < jets.size(); ++s) {
      for (std::size_t k = s + 1; k < jets.size(); ++k, ++idx) {
        const AgentSet s_now = jets[s].at(n), s_next = jets[s].at(n + 1);
        const AgentSet k_now = jets[k].at(n), k_next = jets[k].at(n + 1);
        double vn = 0.0;
        for (int i = 0; i < n_agents; ++i) {
          const bool ik = k_now.contains(i);
          const bool is = s_now.contains(i);
          if (!ik && !is) continue;
          for (int j = 0; j < n_agents; ++j) {
            if (ik && s_next.contains(j)) vn += next(j) * a(j, i);
            if (is && k_next.contains(j)) vn += next(j) * a(j, i);
          }
        }
        acc[idx] += vn;
        series[idx].partial.push_back(acc[idx]);
      }
    }
  }
  return series;
}

std::vector<std::vector<double>> jet_mass_table(const AbsProbApprox& pi,
                                                const std::vector<Jet>& jets,
                                                Step t) {
  std::vector<std::vector<double>> table(jets.size());
  for (std::size_t k = 0; k < jets.size(); ++k) {
    table[k].reserve(static_cast<std::size_t>(t) + 1);
    for (Step n = 0; n <= t; ++n) {
      double m = 0.0;
      for (int i : jets[k].at(n).indices()) m += pi.at(n)(i);
      table[k].push_back(m);
    }
  }
  return table;
}

}  // namespace

ClusterReport ergodic_classes(const ChainSpec& spec, Step t, double eps,
                              Step n0) {
  if (!(t > n0 && n0 >= 0)) throw ParamError("need T > n0 >= 0");
  if (eps <= 0) throw ParamError("clustering tolerance must be positive");
  const ChainSpec chain = materialize(spec, t + 1);
  const Eigen::MatrixXd prod = backward_product(chain, n0, t).data();

  ClusterReport rep;
  rep.clusters = cluster_product_rows(prod, eps);
  rep.residual = within_cluster_residual(prod, rep.clusters);

  const Eigen::VectorXd probe_values = prod * ramp_probe(spec.agents());
  const AbsProbApprox pi = backward_abs_prob(chain, t);
  rep.mass_eval_step = (n0 + t) / 2;
  for (const auto& cluster : rep.clusters) {
    double limit = 0.0;
    double mass = 0.0;
    for (int i : cluster) {
      limit += probe_values(i);
      mass += pi.at(rep.mass_eval_step)(i);
    }
    rep.limits.push_back(limit / static_cast<double>(cluster.size()));
    rep.masses.push_back(mass);
  }
  return rep;
}

DecompositionReport classify(const ChainSpec& spec, Step t, double eps,
                             double theta) {
  if (t < 2) throw ParamError("classification horizon must be >= 2");
  if (eps <= 0) throw ParamError("classification tolerance must be positive");
  if (spec.agents() > 64) throw ParamError("jet analysis caps at 64 agents");
  const ChainSpec chain = materialize(spec, t + 1);

  // Incremental products A(t)...A(0) with the trailing-window row-change
  // residual (Cauchy evidence over the last quarter).
  const Step window_start = t - std::max<Step>(1, t / 4) + 1;
  Eigen::MatrixXd prod = chain.at(0).data();
  double residual = 0.0;
  for (Step k = 1; k <= t; ++k) {
    Eigen::MatrixXd next = chain.at(k).data() * prod;
    if (k >= window_start) {
      residual = std::max(residual, (next - prod).cwiseAbs().maxCoeff());
    }
    prod = std::move(next);
  }
  const bool cauchy = residual <= eps;

  DecompositionReport rep;
  rep.row_change_residual = residual;
  const auto clusters = cluster_product_rows(prod, eps);
  rep.cluster_count = static_cast<int>(clusters.size());
  rep.jets.push_back(Jet::constant(AgentSet()));  // empty J^0
  for (const auto& cluster : clusters) {
    rep.jets.push_back(Jet::constant(AgentSet::from_indices(cluster)));
  }

  rep.island_partition = islands(chain, t, theta);
  rep.clusters_match_islands = rep.island_partition->blocks == clusters;

  const AbsProbApprox pi = backward_abs_prob(chain, t);
  rep.cross_flows = cross_flow_series(chain, pi, rep.jets, t);
  rep.jet_mass_series = jet_mass_table(pi, rep.jets, t);
  rep.mass_eval_step = t / 2;
  for (const auto& series : rep.jet_mass_series) {
    rep.jet_masses.push_back(series[static_cast<std::size_t>(rep.mass_eval_step)]);
  }

  if (!cauchy) {
    rep.verdict = Verdict::kInconclusive;
  } else {
    rep.verdict = rep.cluster_count == 1 ? Verdict::kErgodic
                                         : Verdict::kClassErgodic;
  }
  return rep;
}

DsResult ds_decompose(const ChainSpec& spec, Step t, double eps, int probes,
                      std::uint64_t seed) {
  const int n = spec.agents();
  if (t < 4) throw ParamError("decomposition horizon must be >= 4");
  if (eps <= 0) throw ParamError("decomposition tolerance must be positive");
  if (n > 64) throw ParamError("jet analysis caps at 64 agents");
  if (probes < n) {
    throw ParamError("probe count must be at least the agent count");
  }
  const ChainSpec chain = materialize(spec, t);

  // Probe columns: the N unit vectors, then seeded uniform draws.
  Eigen::MatrixXd x0 = Eigen::MatrixXd::Zero(n, probes);
  x0.leftCols(n).setIdentity();
  Rng rng(seed ^ Rng::hash_name("probes"));
  for (int p = n; p < probes; ++p) {
    for (int i = 0; i < n; ++i) x0(i, p) = rng.uniform();
  }
  Eigen::VectorXd scale(probes);
  for (int p = 0; p < probes; ++p) {
    scale(p) = std::max(1.0, x0.col(p).maxCoeff() - x0.col(p).minCoeff());
  }

  // Pass 1: terminal probe values.
  Eigen::MatrixXd terminal = x0;
  for (Step k = 0; k < t; ++k) terminal = chain.at(k).data() * terminal;

  auto scaled_gap = [&](const Eigen::MatrixXd& states, int i, int j) {
    double g = 0.0;
    for (int p = 0; p < probes; ++p) {
      g = std::max(g, std::abs(states(i, p) - states(j, p)) / scale(p));
    }
    return g;
  };

  ClusterReport clusters;
  clusters.clusters = group_agents(
      n, [&](int i, int j) { return scaled_gap(terminal, i, j) <= eps; });
  const int c = static_cast<int>(clusters.clusters.size());
  for (const auto& cluster : clusters.clusters) {
    for (std::size_t a = 0; a < cluster.size(); ++a) {
      for (std::size_t b = a + 1; b < cluster.size(); ++b) {
        clusters.residual = std::max(
            clusters.residual, scaled_gap(terminal, cluster[a], cluster[b]));
      }
    }
  }

  // Centroids in probe space; ramp limits from the unit-vector block.
  Eigen::MatrixXd centroid = Eigen::MatrixXd::Zero(c, probes);
  std::vector<int> cluster_of(static_cast<std::size_t>(n), 0);
  for (int k = 0; k < c; ++k) {
    for (int i : clusters.clusters[static_cast<std::size_t>(k)]) {
      centroid.row(k) += terminal.row(i);
      cluster_of[static_cast<std::size_t>(i)] = k;
    }
    centroid.row(k) /=
        static_cast<double>(clusters.clusters[static_cast<std::size_t>(k)].size());
  }
  const Eigen::VectorXd ramp_values = terminal.leftCols(n) * ramp_probe(n);

  const AbsProbApprox pi = backward_abs_prob(chain, t);
  clusters.mass_eval_step = t / 2;
  for (const auto& cluster : clusters.clusters) {
    double limit = 0.0;
    double mass = 0.0;
    for (int i : cluster) {
      limit += ramp_values(i);
      mass += pi.at(clusters.mass_eval_step)(i);
    }
    clusters.limits.push_back(limit / static_cast<double>(cluster.size()));
    clusters.masses.push_back(mass);
  }

  // Pass 2: nearest-centroid assignment through time, per-agent Cauchy
  // tail, and assignment stabilization.
  std::vector<std::vector<int>> assign(
      static_cast<std::size_t>(t) + 1, std::vector<int>(static_cast<std::size_t>(n)));
  std::vector<char> cauchy(static_cast<std::size_t>(n), 1);
  std::vector<Step> last_change(static_cast<std::size_t>(n), 0);
  const Step tail_start = t - t / 4;
  Eigen::MatrixXd states = x0;
  for (Step step = 0; step <= t; ++step) {
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int k = 0; k < c; ++k) {
        double d = 0.0;
        for (int p = 0; p < probes; ++p) {
          d = std::max(d, std::abs(states(i, p) - centroid(k, p)) / scale(p));
        }
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      assign[static_cast<std::size_t>(step)][static_cast<std::size_t>(i)] = best;
      if (step > 0 &&
          best != assign[static_cast<std::size_t>(step - 1)][static_cast<std::size_t>(i)]) {
        last_change[static_cast<std::size_t>(i)] = step;
      }
      if (step >= tail_start) {
        double dev = 0.0;
        for (int p = 0; p < probes; ++p) {
          dev = std::max(dev, std::abs(states(i, p) - terminal(i, p)) / scale(p));
        }
        if (dev > eps) cauchy[static_cast<std::size_t>(i)] = 0;
      }
    }
    if (step < t) states = chain.at(step).data() * states;
  }

  AgentSet j0;
  for (int i = 0; i < n; ++i) {
    const bool stabilized = last_change[static_cast<std::size_t>(i)] <= tail_start;
    if (!cauchy[static_cast<std::size_t>(i)] || !stabilized) j0.add(i);
  }

  DecompositionReport rep;
  rep.cluster_count = c;
  {
    std::vector<std::vector<AgentSet>> sets(
        static_cast<std::size_t>(c) + 1,
        std::vector<AgentSet>(static_cast<std::size_t>(t) + 1));
    for (Step step = 0; step <= t; ++step) {
      for (int i = 0; i < n; ++i) {
        if (j0.contains(i)) {
          sets[0][static_cast<std::size_t>(step)].add(i);
        } else {
          const int k = assign[static_cast<std::size_t>(step)][static_cast<std::size_t>(i)];
          sets[static_cast<std::size_t>(k) + 1][static_cast<std::size_t>(step)].add(i);
        }
      }
    }
    for (auto& seq : sets) {
      const AgentSet tail = seq.back();
      rep.jets.emplace_back(std::move(seq), tail);
    }
  }

  rep.cross_flows = cross_flow_series(chain, pi, rep.jets, t);
  rep.jet_mass_series = jet_mass_table(pi, rep.jets, t);
  rep.mass_eval_step = t / 2;
  for (const auto& series : rep.jet_mass_series) {
    rep.jet_masses.push_back(series[static_cast<std::size_t>(rep.mass_eval_step)]);
  }

  if (!j0.empty()) {
    rep.verdict = Verdict::kInconclusive;
  } else {
    rep.verdict = c == 1 ? Verdict::kErgodic : Verdict::kClassErgodic;
  }

  DsResult out;
  out.decomposition = std::move(rep);
  out.clusters = std::move(clusters);
  return out;
}

SortedConvergenceReport sorted_state_convergence(const TrajectoryRecord& traj,
                                                 double eps) {
  if (traj.horizon < 8) throw ParamError("sorted-convergence needs T >= 8");
  const Step t = traj.horizon;
  const Step start = t - t / 4;
  const int n = static_cast<int>(traj.sorted_states.front().size());
  SortedConvergenceReport rep;
  rep.oscillation.assign(static_cast<std::size_t>(n), 0.0);
  const StateVector& last = traj.sorted_states[static_cast<std::size_t>(t)];
  for (Step k = start; k <= t; ++k) {
    const StateVector& z = traj.sorted_states[static_cast<std::size_t>(k)];
    for (int i = 0; i < n; ++i) {
      rep.oscillation[static_cast<std::size_t>(i)] =
          std::max(rep.oscillation[static_cast<std::size_t>(i)],
                   std::abs(z(i) - last(i)));
    }
  }
  rep.max_oscillation =
      *std::max_element(rep.oscillation.begin(), rep.oscillation.end());
  rep.pass = rep.max_oscillation <= eps;
  return rep;
}

}  // namespace jetflow
