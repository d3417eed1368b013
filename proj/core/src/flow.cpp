#include "jetflow/flow.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace jetflow {

namespace {

double cross(const Eigen::MatrixXd& a, AgentSet rows, AgentSet cols) {
  double s = 0.0;
  const int n = static_cast<int>(a.rows());
  for (int i = 0; i < n; ++i) {
    if (!rows.contains(i)) continue;
    for (int j = 0; j < n; ++j) {
      if (cols.contains(j)) s += a(i, j);
    }
  }
  return s;
}

void require_disjoint(AgentSet a, AgentSet b, const char* when) {
  if (!a.disjoint(b)) {
    throw ParamError(std::string("jets overlap at ") + when);
  }
}

}  // namespace

FlowGraph flow_graph(const ChainSpec& spec, Step t) {
  if (t < 1) throw ParamError("flow graph horizon must be >= 1");
  const int n = spec.agents();
  FlowGraph g;
  g.horizon = t;
  g.w = Eigen::MatrixXd::Zero(n, n);
  for (Step k = 0; k < t; ++k) {
    const Eigen::MatrixXd a = spec.at(k).data();
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double inc = a(i, j) + a(j, i);
        g.w(i, j) += inc;
        g.w(j, i) += inc;
      }
    }
  }
  return g;
}

IslandPartition islands(const FlowGraph& graph, double theta) {
  if (theta <= 0) throw ParamError("island threshold must be positive");
  const int n = static_cast<int>(graph.w.rows());
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
      if (graph.w(i, j) >= theta) {
        parent[static_cast<std::size_t>(find(i))] = find(j);
      }
    }
  }
  std::vector<std::vector<int>> by_root(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    by_root[static_cast<std::size_t>(find(i))].push_back(i);
  }
  IslandPartition part;
  part.theta = theta;
  part.horizon = graph.horizon;
  for (auto& blk : by_root) {
    if (!blk.empty()) part.blocks.push_back(std::move(blk));
  }
  // Members enter in index order; order the blocks by smallest member.
  std::sort(part.blocks.begin(), part.blocks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return part;
}

IslandPartition islands(const ChainSpec& spec, Step t, double theta) {
  return islands(flow_graph(spec, t), theta);
}

double jet_interaction_step(const StochasticMatrix& a, AgentSet js_now,
                            AgentSet js_next, AgentSet jk_now,
                            AgentSet jk_next) {
  require_disjoint(js_now, jk_now, "time n");
  require_disjoint(js_next, jk_next, "time n+1");
  return cross(a.data(), js_next, jk_now) + cross(a.data(), jk_next, js_now);
}

std::vector<double> jet_interaction_total(const ChainSpec& spec, const Jet& js,
                                          const Jet& jk, Step t) {
  if (t < 1) throw ParamError("interaction horizon must be >= 1");
  std::vector<double> partial;
  partial.reserve(static_cast<std::size_t>(t));
  double acc = 0.0;
  for (Step n = 0; n < t; ++n) {
    acc += jet_interaction_step(spec.at(n), js.at(n), js.at(n + 1), jk.at(n),
                                jk.at(n + 1));
    partial.push_back(acc);
  }
  return partial;
}

std::vector<double> jet_v_total(const ChainSpec& spec, const AbsProbApprox& pi,
                                const Jet& js, const Jet& jk, Step t) {
  if (t < 1) throw ParamError("interaction horizon must be >= 1");
  if (pi.horizon < t) throw ParamError("absolute-probability horizon too short");
  std::vector<double> partial;
  partial.reserve(static_cast<std::size_t>(t));
  double acc = 0.0;
  const int n_agents = spec.agents();
  for (Step n = 0; n < t; ++n) {
    const AgentSet s_now = js.at(n), s_next = js.at(n + 1);
    const AgentSet k_now = jk.at(n), k_next = jk.at(n + 1);
    require_disjoint(s_now, k_now, "time n");
    require_disjoint(s_next, k_next, "time n+1");
    const Eigen::MatrixXd a = spec.at(n).data();
    const Eigen::VectorXd& next = pi.at(n + 1);
    // r_ij(n) = pi_j(n+1) A_ji(n), summed over (i in Jk(n), j in Js(n+1))
    // and (i in Js(n), j in Jk(n+1)).
    double vn = 0.0;
    for (int i = 0; i < n_agents; ++i) {
      const bool in_k_now = k_now.contains(i);
      const bool in_s_now = s_now.contains(i);
      if (!in_k_now && !in_s_now) continue;
      for (int j = 0; j < n_agents; ++j) {
        if (in_k_now && s_next.contains(j)) vn += next(j) * a(j, i);
        if (in_s_now && k_next.contains(j)) vn += next(j) * a(j, i);
      }
    }
    acc += vn;
    partial.push_back(acc);
  }
  return partial;
}

LeaderReport is_leader(const ChainSpec& spec, const Jet& j, Step t,
                       double budget) {
  if (t < 1) throw ParamError("leader horizon must be >= 1");
  const int n_agents = spec.agents();
  if (!j.proper_up_to(n_agents, t)) {
    throw ParamError("leader jet must be proper at every step");
  }
  LeaderReport rep;
  rep.budget = budget;
  rep.influence.reserve(static_cast<std::size_t>(t));
  double acc = 0.0;
  for (Step n = 0; n < t; ++n) {
    const AgentSet inside = j.at(n + 1);
    const AgentSet outside = j.at(n).complement(n_agents);
    acc += cross(spec.at(n).data(), inside, outside);
    rep.influence.push_back(acc);
  }
  rep.leader_at_horizon = acc <= budget;
  return rep;
}

JetScanReport static_jet_flow_scan(const ChainSpec& spec, Step t,
                                   std::optional<AgentSet> within) {
  if (t < 1) throw ParamError("scan horizon must be >= 1");
  const int n = spec.agents();
  if (n > 64) throw ParamError("jet analysis caps at 64 agents");
  const AgentSet ground = within.value_or(AgentSet::full(n));
  const int g = ground.count();
  if (g < 2) throw ParamError("scan ground set needs at least two agents");
  if (g > 20) throw BudgetError("exhaustive subset scan capped at 20 agents");

  // U over constant jets factors through the cumulative matrix.
  Eigen::MatrixXd cum = Eigen::MatrixXd::Zero(n, n);
  for (Step k = 0; k < t; ++k) cum += spec.at(k).data();

  const std::vector<int> members = ground.indices();
  JetScanReport rep;
  rep.horizon = t;
  rep.min_value = std::numeric_limits<double>::infinity();
  // U(S, ground \ S) = U(ground \ S, S): scanning subsets containing the
  // smallest member covers every split once.
  const std::uint64_t half = 1ULL << (g - 1);
  for (std::uint64_t pick = 0; pick < half; ++pick) {
    AgentSet s = AgentSet::single(members[0]);
    for (int b = 1; b < g; ++b) {
      if ((pick >> (b - 1)) & 1ULL) s.add(members[static_cast<std::size_t>(b)]);
    }
    const AgentSet rest = ground.minus(s);
    if (rest.empty()) continue;  // S = ground is not proper
    const double u = cross(cum, s, rest) + cross(cum, rest, s);
    ++rep.subsets_scanned;
    if (u < rep.min_value) {
      rep.min_value = u;
      rep.min_subset = s;
    }
  }
  return rep;
}

}  // namespace jetflow
