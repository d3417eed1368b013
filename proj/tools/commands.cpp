#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "chain_io.hpp"
#include "jetflow/analysis.hpp"
#include "jetflow/generators.hpp"
#include "jetflow/matching.hpp"
#include "jetflow/properties.hpp"

namespace jetflow::cli {

namespace {

using nlohmann::ordered_json;

ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["command"] = c.command;
  j["input"] = c.input;
  j["out"] = c.out;
  j["format"] = c.format;
  j["horizon"] = c.horizon;
  j["eps"] = c.eps;
  j["theta"] = c.theta;
  j["psi"] = c.psi;
  j["row_tol"] = c.row_tol;
  j["seed"] = c.seed;
  j["probes"] = c.probes;
  j["strict"] = c.strict;
  if (c.command == "match") j["step"] = c.step;
  if (c.x0) j["x0"] = *c.x0;
  if (c.within) j["within"] = *c.within;
  if (c.command == "gen") {
    j["family"] = c.family;
    j["n"] = c.agents;
    j["params"] = c.params;
  }
  return j;
}

ordered_json vector_json(const Eigen::VectorXd& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

ordered_json blocks_json(const std::vector<std::vector<int>>& blocks) {
  ordered_json a = ordered_json::array();
  for (const auto& b : blocks) a.push_back(b);
  return a;
}

ordered_json cross_flow_json(const std::vector<CrossFlowSeries>& flows) {
  ordered_json a = ordered_json::array();
  for (const auto& cf : flows) {
    ordered_json e;
    e["jets"] = {cf.jet_a, cf.jet_b};
    e["total"] = cf.partial.empty() ? 0.0 : cf.partial.back();
    a.push_back(e);
  }
  return a;
}

void write_text(const RunConfig& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.out, std::ios::binary);
  if (!out) throw Error("cannot write output file: " + c.out);
  out << text;
}

int finish(const RunConfig& c, ordered_json result, ordered_json residuals,
           std::vector<std::string> warnings, bool inconclusive = false) {
  ordered_json report;
  report["config"] = config_json(c);
  report["result"] = std::move(result);
  report["residuals"] = std::move(residuals);
  report["warnings"] = warnings;
  write_text(c, report.dump(2) + "\n");
  if (c.strict && inconclusive) return kExitInconclusive;
  return kExitOk;
}

std::vector<double> default_x0(int n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = i;
  return x;
}

int cmd_simulate(const RunConfig& c, const ChainSpec& spec) {
  const int n = spec.agents();
  std::vector<double> x0v = c.x0 ? *c.x0 : default_x0(n);
  if (static_cast<int>(x0v.size()) != n) {
    throw Error("--x0 must list exactly " + std::to_string(n) + " values");
  }
  Eigen::VectorXd x0 = Eigen::Map<Eigen::VectorXd>(x0v.data(), n);
  const TrajectoryRecord traj = simulate(spec, x0, c.horizon);

  if (c.format == "csv") {
    std::ostringstream csv;
    csv << "n";
    for (int i = 0; i < n; ++i) csv << ",x" << i;
    csv << ",spread";
    for (int i = 0; i < n; ++i) csv << ",z" << i;
    csv << "\n";
    for (Step k = 0; k <= traj.horizon; ++k) {
      csv << k;
      const auto idx = static_cast<std::size_t>(k);
      for (int i = 0; i < n; ++i) csv << "," << traj.states[idx](i);
      csv << "," << traj.spread[idx];
      for (int i = 0; i < n; ++i) csv << "," << traj.sorted_states[idx](i);
      csv << "\n";
    }
    write_text(c, csv.str());
    return kExitOk;
  }

  ordered_json result;
  result["horizon"] = traj.horizon;
  result["x0"] = x0v;
  result["final"] = vector_json(traj.states.back());
  ordered_json states = ordered_json::array();
  ordered_json sorted = ordered_json::array();
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    states.push_back(vector_json(traj.states[k]));
    sorted.push_back(vector_json(traj.sorted_states[k]));
  }
  result["states"] = states;
  result["sorted_states"] = sorted;
  result["spread"] = traj.spread;
  ordered_json residuals;
  residuals["final_spread"] = traj.spread.back();
  return finish(c, result, residuals, {});
}

int cmd_classify(const RunConfig& c, const ChainSpec& spec) {
  const DecompositionReport rep = classify(spec, c.horizon, c.eps, c.theta);
  ordered_json result;
  result["verdict"] = to_string(rep.verdict);
  result["cluster_count"] = rep.cluster_count;
  ordered_json clusters = ordered_json::array();
  for (std::size_t k = 1; k < rep.jets.size(); ++k) {
    clusters.push_back(rep.jets[k].tail().indices());
  }
  result["clusters"] = clusters;
  result["islands"] = blocks_json(rep.island_partition->blocks);
  result["clusters_match_islands"] = rep.clusters_match_islands;
  result["jet_masses"] = rep.jet_masses;
  result["mass_eval_step"] = rep.mass_eval_step;
  result["cross_flows"] = cross_flow_json(rep.cross_flows);
  ordered_json residuals;
  residuals["row_change_trailing_window"] = rep.row_change_residual;
  std::vector<std::string> warnings;
  if (!rep.clusters_match_islands) {
    warnings.push_back("product clusters disagree with islands");
  }
  return finish(c, result, residuals, warnings,
                rep.verdict == Verdict::kInconclusive);
}

int cmd_islands(const RunConfig& c, const ChainSpec& spec) {
  const IslandPartition part = islands(spec, c.horizon, c.theta);
  ordered_json result;
  result["blocks"] = blocks_json(part.blocks);
  result["theta"] = part.theta;
  result["horizon"] = part.horizon;
  return finish(c, result, ordered_json::object(), {});
}

int cmd_pstar(const RunConfig& c, const ChainSpec& spec) {
  ordered_json result;
  result["pstar"] = pstar_estimate(spec, c.horizon);
  result["terminal"] = "uniform";
  result["estimate_only"] = true;  // existence bound, not a certificate
  return finish(c, result, ordered_json::object(), {});
}

int cmd_match(const RunConfig& c, const ChainSpec& spec) {
  const StochasticMatrix a = matrix_at(spec, c.step);
  ordered_json result;
  ordered_json residuals = ordered_json::object();
  std::vector<std::string> warnings;
  try {
    const MatchingResult m = self_confident_permutation(a, c.psi);
    result["matched"] = true;
    result["tau"] = m.tau;
    result["delta"] = m.delta;
    result["matched_entries"] = m.matched_entries;
  } catch (const MatchingError& e) {
    result["matched"] = false;
    result["delta"] = e.delta;
    result["hall_violator"] = e.violator.indices();
    result["violator_image"] = e.image.indices();
    warnings.push_back(
        "no perfect matching: input is not balanced asymmetric at this bound");
  }
  result["step"] = c.step;
  return finish(c, result, residuals, warnings);
}

int cmd_normalize(const RunConfig& c, const ChainSpec& spec) {
  const NormalizedChain norm = normalize_chain(spec, c.psi, c.horizon);
  double min_diag = 1.0;
  for (const auto& b : norm.b) {
    for (int i = 0; i < b.size(); ++i) min_diag = std::min(min_diag, b(i, i));
  }
  const AbsProbApprox pi_b = backward_abs_prob(norm.b_chain(), c.horizon);
  const AbsProbApprox pi_a = pullback_abs_prob(spec, pi_b, norm.perms);
  double residual = 0.0;
  for (Step n = 0; n < c.horizon; ++n) {
    const Eigen::VectorXd rhs =
        (pi_a.at(n + 1).transpose() * spec.at(n).data()).transpose();
    residual = std::max(residual, (pi_a.at(n) - rhs).cwiseAbs().maxCoeff());
  }
  ordered_json result;
  result["delta"] = norm.delta;
  result["min_diagonal"] = min_diag;
  ordered_json perms = ordered_json::array();
  for (const auto& p : norm.perms) perms.push_back(p);
  result["perms"] = perms;
  result["pi0"] = vector_json(pi_a.at(0));
  ordered_json residuals;
  residuals["pullback"] = residual;
  return finish(c, result, residuals, {});
}

int cmd_dsdecompose(const RunConfig& c, const ChainSpec& spec) {
  const int n = spec.agents();
  const int probes = c.probes > 0 ? c.probes : std::max(2 * n, n);
  const DsResult ds = ds_decompose(spec, c.horizon, c.eps, probes, c.seed);
  const DecompositionReport& rep = ds.decomposition;
  ordered_json result;
  result["verdict"] = to_string(rep.verdict);
  result["cluster_count"] = rep.cluster_count;
  result["clusters"] = blocks_json(ds.clusters.clusters);
  result["limits"] = ds.clusters.limits;
  result["masses"] = ds.clusters.masses;
  result["j0"] = rep.jets.front().tail().indices();
  ordered_json tails = ordered_json::array();
  for (std::size_t k = 1; k < rep.jets.size(); ++k) {
    tails.push_back(rep.jets[k].tail().indices());
  }
  result["jet_tails"] = tails;
  result["jet_masses"] = rep.jet_masses;
  result["mass_eval_step"] = rep.mass_eval_step;
  result["cross_flows"] = cross_flow_json(rep.cross_flows);
  ordered_json residuals;
  residuals["cluster_residual"] = ds.clusters.residual;
  return finish(c, result, residuals, {},
                rep.verdict == Verdict::kInconclusive);
}

int cmd_scanjets(const RunConfig& c, const ChainSpec& spec) {
  std::optional<AgentSet> within;
  if (c.within) within = AgentSet::from_indices(*c.within);
  const JetScanReport rep = static_jet_flow_scan(spec, c.horizon, within);
  ordered_json result;
  result["min_subset"] = rep.min_subset.indices();
  result["min_value"] = rep.min_value;
  result["subsets_scanned"] = rep.subsets_scanned;
  result["horizon"] = rep.horizon;
  return finish(c, result, ordered_json::object(), {});
}

int cmd_gen(const RunConfig& c) {
  if (c.family.empty()) throw Error("gen requires --family");
  if (c.agents < 1) throw Error("gen requires --n");
  const ChainSpec spec = make_chain(c.family, c.agents, c.seed, c.params);
  write_text(c, chain_to_json(spec).dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int run(const RunConfig& config) {
  try {
    if (config.command == "gen") return cmd_gen(config);
    if (config.input.empty()) {
      throw Error(config.command + " requires --input");
    }
    if (config.format != "json" && config.format != "csv") {
      throw Error("--format must be json or csv");
    }
    if (config.format == "csv" && config.command != "simulate") {
      throw Error("csv output is limited to per-step series (simulate)");
    }
    const ChainSpec spec = parse_chain_file(config.input, config.row_tol);
    if (config.command == "simulate") return cmd_simulate(config, spec);
    if (config.command == "classify") return cmd_classify(config, spec);
    if (config.command == "islands") return cmd_islands(config, spec);
    if (config.command == "pstar") return cmd_pstar(config, spec);
    if (config.command == "match") return cmd_match(config, spec);
    if (config.command == "normalize") return cmd_normalize(config, spec);
    if (config.command == "dsdecompose") return cmd_dsdecompose(config, spec);
    if (config.command == "scanjets") return cmd_scanjets(config, spec);
    throw Error("unknown command: " + config.command);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace jetflow::cli
