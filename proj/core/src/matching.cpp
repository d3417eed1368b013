#include "jetflow/matching.hpp"

#include <algorithm>

namespace jetflow {

double delta_bound(double psi, int n) {
  if (psi < 1.0 || n < 2) {
    throw ParamError("delta bound needs psi >= 1 and N >= 2");
  }
  return 4.0 / (psi * n * n + 4.0 * n - 4.0);
}

namespace {

// Kuhn augmenting path: assign column c a free row, displacing along
// alternating paths. `blocked` rows are never touched.
bool augment(int c, const std::vector<std::vector<int>>& adj,
             std::vector<int>& match_col, std::vector<int>& match_row,
             std::vector<char>& visited) {
  for (int r : adj[static_cast<std::size_t>(c)]) {
    if (visited[static_cast<std::size_t>(r)]) continue;
    visited[static_cast<std::size_t>(r)] = 1;
    const int owner = match_row[static_cast<std::size_t>(r)];
    if (owner < 0 || augment(owner, adj, match_col, match_row, visited)) {
      match_row[static_cast<std::size_t>(r)] = c;
      match_col[static_cast<std::size_t>(c)] = r;
      return true;
    }
  }
  return false;
}

// Hall violator on the row side: rows K whose threshold edges reach
// fewer than |K| columns.
[[noreturn]] void throw_hall_violator(const Eigen::MatrixXd& a, double delta) {
  const int n = static_cast<int>(a.rows());
  std::vector<std::vector<int>> row_adj(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (a(r, c) >= delta) row_adj[static_cast<std::size_t>(r)].push_back(c);
    }
  }
  std::vector<int> match_row(static_cast<std::size_t>(n), -1);  // row -> col
  std::vector<int> match_col(static_cast<std::size_t>(n), -1);  // col -> row
  for (int r = 0; r < n; ++r) {
    std::vector<char> visited(static_cast<std::size_t>(n), 0);
    augment(r, row_adj, match_row, match_col, visited);
  }
  int unmatched = -1;
  for (int r = 0; r < n; ++r) {
    if (match_row[static_cast<std::size_t>(r)] < 0) {
      unmatched = r;
      break;
    }
  }
  if (unmatched < 0) throw Error("hall violator requested on matched graph");

  // Alternating-reachability closure from the unmatched row.
  AgentSet rows = AgentSet::single(unmatched);
  AgentSet cols;
  bool grew = true;
  while (grew) {
    grew = false;
    for (int r : rows.indices()) {
      for (int c : row_adj[static_cast<std::size_t>(r)]) {
        if (cols.contains(c)) continue;
        cols.add(c);
        grew = true;
        const int owner = match_col[static_cast<std::size_t>(c)];
        if (owner >= 0 && !rows.contains(owner)) rows.add(owner);
      }
    }
  }
  throw MatchingError(rows, cols, delta);
}

}  // namespace

MatchingResult self_confident_permutation(const StochasticMatrix& a,
                                          double psi) {
  const int n = a.size();
  const double delta = delta_bound(psi, n);

  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));  // col -> rows
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) {
      if (a(r, c) >= delta) adj[static_cast<std::size_t>(c)].push_back(r);
    }
  }

  std::vector<int> match_col(static_cast<std::size_t>(n), -1);
  std::vector<int> match_row(static_cast<std::size_t>(n), -1);
  int size = 0;
  for (int c = 0; c < n; ++c) {
    std::vector<char> visited(static_cast<std::size_t>(n), 0);
    if (augment(c, adj, match_col, match_row, visited)) ++size;
  }
  if (size < n) throw_hall_violator(a.data(), delta);

  // Refine to the lexicographically smallest tau, column by column.
  std::vector<char> locked_row(static_cast<std::size_t>(n), 0);
  for (int c = 0; c < n; ++c) {
    for (int r : adj[static_cast<std::size_t>(c)]) {
      if (locked_row[static_cast<std::size_t>(r)]) continue;
      if (match_col[static_cast<std::size_t>(c)] == r) break;  // already smallest
      // Try to hand r to column c and re-seat the displaced column.
      const int displaced = match_row[static_cast<std::size_t>(r)];
      const int old_r = match_col[static_cast<std::size_t>(c)];
      match_col[static_cast<std::size_t>(c)] = r;
      match_row[static_cast<std::size_t>(r)] = c;
      match_col[static_cast<std::size_t>(displaced)] = -1;
      if (old_r >= 0) match_row[static_cast<std::size_t>(old_r)] = -1;
      std::vector<char> visited = locked_row;
      visited[static_cast<std::size_t>(r)] = 1;
      if (augment(displaced, adj, match_col, match_row, visited)) break;
      // Revert.
      match_col[static_cast<std::size_t>(displaced)] = r;
      match_row[static_cast<std::size_t>(r)] = displaced;
      match_col[static_cast<std::size_t>(c)] = old_r;
      if (old_r >= 0) match_row[static_cast<std::size_t>(old_r)] = c;
    }
    locked_row[static_cast<std::size_t>(match_col[static_cast<std::size_t>(c)])] = 1;
  }

  MatchingResult res;
  res.delta = delta;
  res.tau = std::move(match_col);
  res.matched_entries.reserve(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) {
    res.matched_entries.push_back(a(res.tau[static_cast<std::size_t>(c)], c));
  }
  return res;
}

NormalizedChain normalize_chain(const ChainSpec& spec, double psi, Step t) {
  if (t < 1) throw ParamError("normalization horizon must be >= 1");
  const int n = spec.agents();
  NormalizedChain out;
  out.delta = delta_bound(psi, n);
  out.b.reserve(static_cast<std::size_t>(t));
  out.perms.reserve(static_cast<std::size_t>(t));

  std::vector<int> prev_tau(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) prev_tau[static_cast<std::size_t>(i)] = i;

  for (Step step = 0; step < t; ++step) {
    const Eigen::MatrixXd a = spec.at(step).data();
    // M = A(n) P^t(n-1): column k of M is column prev_tau[k] of A.
    Eigen::MatrixXd m(n, n);
    for (int k = 0; k < n; ++k) {
      m.col(k) = a.col(prev_tau[static_cast<std::size_t>(k)]);
    }
    MatchingResult match;
    try {
      match = self_confident_permutation(StochasticMatrix::validated(m, 1e-9),
                                         psi);
    } catch (const MatchingError& e) {
      throw MatchingError(e.violator, e.image, e.delta, step);
    }
    // B(n) = P(n) M: row i of B is row tau[i] of M.
    Eigen::MatrixXd b(n, n);
    for (int i = 0; i < n; ++i) {
      b.row(i) = m.row(match.tau[static_cast<std::size_t>(i)]);
    }
    out.b.push_back(StochasticMatrix::validated(std::move(b), 1e-9));
    out.perms.push_back(match.tau);
    prev_tau = std::move(match.tau);
  }
  return out;
}

AbsProbApprox pullback_abs_prob(const ChainSpec& spec,
                                const AbsProbApprox& pi_b,
                                const std::vector<std::vector<int>>& perms) {
  const int n = spec.agents();
  const Step t = pi_b.horizon;
  if (static_cast<Step>(perms.size()) < t) {
    throw ParamError("pullback needs a permutation for every step");
  }
  AbsProbApprox out;
  out.horizon = t;
  out.pi.assign(static_cast<std::size_t>(t) + 1, Eigen::VectorXd());
  // pi_A(n) = pi_B(n) P(n-1), P(-1) = I: component tau_{n-1}[i] takes
  // pi_B(n)[i].
  out.pi[0] = pi_b.at(0);
  for (Step step = 1; step <= t; ++step) {
    const std::vector<int>& tau = perms[static_cast<std::size_t>(step - 1)];
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) {
      v(tau[static_cast<std::size_t>(i)]) = pi_b.at(step)(i);
    }
    out.pi[static_cast<std::size_t>(step)] = std::move(v);
  }
  out.terminal = out.pi[static_cast<std::size_t>(t)];

  for (Step step = 0; step < t; ++step) {
    const Eigen::MatrixXd a = spec.at(step).data();
    const Eigen::VectorXd lhs = out.at(step);
    const Eigen::VectorXd rhs =
        (out.at(step + 1).transpose() * a).transpose();
    if ((lhs - rhs).cwiseAbs().maxCoeff() > 1e-9) {
      throw Error("pullback residual exceeds 1e-9 at step " +
                  std::to_string(step) + " (inconsistent inputs)");
    }
  }
  return out;
}

}  // namespace jetflow
