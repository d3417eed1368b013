#include "jetflow/properties.hpp"

#include <cmath>
#include <limits>

#include "jetflow/absprob.hpp"
#include "jetflow/rng.hpp"

namespace jetflow {

namespace {

double cross_sum(const Eigen::MatrixXd& a, AgentSet from_rows, AgentSet to_cols) {
  double s = 0.0;
  const int n = static_cast<int>(a.rows());
  for (int i = 0; i < n; ++i) {
    if (!from_rows.contains(i)) continue;
    for (int j = 0; j < n; ++j) {
      if (to_cols.contains(j)) s += a(i, j);
    }
  }
  return s;
}

// inflow: rows outside m1 reading from columns in m1.
double cut_inflow(const Eigen::MatrixXd& a, AgentSet m1, int n) {
  return cross_sum(a, m1.complement(n), m1);
}

double cut_outflow(const Eigen::MatrixXd& a, AgentSet m1, int n) {
  return cross_sum(a, m1, m1.complement(n));
}

// All k-element subsets of {0..n-1} in increasing mask order (Gosper).
std::vector<std::uint64_t> subsets_of_size(int n, int k) {
  std::vector<std::uint64_t> out;
  const std::uint64_t limit = 1ULL << n;
  std::uint64_t v = (1ULL << k) - 1;
  while (v < limit) {
    out.push_back(v);
    const std::uint64_t c = v & (~v + 1);
    const std::uint64_t r = v + c;
    v = (((r ^ v) >> 2) / c) | r;
  }
  return out;
}

AgentSet random_subset_of_size(Rng& rng, int n, int k) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  rng.permutation(n, idx);
  AgentSet s;
  for (int t = 0; t < k; ++t) s.add(idx[static_cast<std::size_t>(t)]);
  return s;
}

}  // namespace

PropertyCertificate self_confidence(const ChainSpec& spec, Step t) {
  if (t < 1) throw ParamError("self-confidence horizon must be >= 1");
  PropertyCertificate cert;
  cert.property = "self-confidence";
  cert.method = CheckMethod::kExhaustive;
  double best = std::numeric_limits<double>::infinity();
  Step best_n = 0;
  int best_i = 0;
  for (Step n = 0; n < t; ++n) {
    const StochasticMatrix a = spec.at(n);
    for (int i = 0; i < a.size(); ++i) {
      if (a(i, i) < best) {
        best = a(i, i);
        best_n = n;
        best_i = i;
      }
    }
  }
  cert.bound = best;
  cert.holds = best > 0.0;
  if (!cert.holds) {
    Witness w;
    w.step = best_n;
    w.i = best_i;
    w.lhs = best;
    w.rhs = 0.0;
    cert.witness = w;
  }
  return cert;
}

PropertyCertificate check_cut_balance(const StochasticMatrix& a, double psi,
                                      const SubsetCheckOptions& opts) {
  if (psi < 1.0) {
    throw ParamError(
        "cut-balance bound must be >= 1 (a cut and its complement force it)");
  }
  const int n = a.size();
  bool exhaustive = n <= kMaxExhaustiveCutBalance;
  if (opts.mode == SubsetCheckOptions::Mode::kExhaustive && !exhaustive) {
    throw BudgetError("exhaustive cut-balance check capped at N = 20");
  }
  if (opts.mode == SubsetCheckOptions::Mode::kSampled) exhaustive = false;

  PropertyCertificate cert;
  cert.property = "cut-balance";
  cert.bound = psi;
  cert.holds = true;
  cert.method = exhaustive ? CheckMethod::kExhaustive : CheckMethod::kSampled;

  auto test = [&](AgentSet m1) {
    const double in = cut_inflow(a.data(), m1, n);
    const double out = cut_outflow(a.data(), m1, n);
    if (in > psi * out + opts.tol) {
      cert.holds = false;
      Witness w;
      w.set_a = m1;
      w.lhs = in;
      w.rhs = psi * out;
      cert.witness = w;
      return false;
    }
    return true;
  };

  if (exhaustive) {
    const std::uint64_t top = AgentSet::full(n).mask();
    for (std::uint64_t m = 1; m < top; ++m) {
      if (!test(AgentSet(m))) return cert;
    }
  } else {
    Rng rng(opts.seed);
    for (int s = 0; s < opts.samples; ++s) {
      const int k = 1 + rng.index(n - 1);
      if (!test(random_subset_of_size(rng, n, k))) return cert;
    }
  }
  return cert;
}

double min_cut_balance(const StochasticMatrix& a) {
  const int n = a.size();
  if (n > kMaxExhaustiveCutBalance) {
    throw BudgetError("min cut-balance enumeration capped at N = 20");
  }
  double worst = 1.0;
  const std::uint64_t top = AgentSet::full(n).mask();
  for (std::uint64_t m = 1; m < top; ++m) {
    const AgentSet m1(m);
    const double in = cut_inflow(a.data(), m1, n);
    const double out = cut_outflow(a.data(), m1, n);
    if (in == 0.0) continue;
    if (out == 0.0) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, in / out);
  }
  return worst;
}

PropertyCertificate check_balanced_asymmetry(const StochasticMatrix& a,
                                             double psi,
                                             const SubsetCheckOptions& opts) {
  if (psi < 1.0) throw ParamError("balanced-asymmetry bound must be >= 1");
  const int n = a.size();
  bool exhaustive = n <= kMaxExhaustiveBalancedAsymmetry;
  if (opts.mode == SubsetCheckOptions::Mode::kExhaustive && !exhaustive) {
    throw BudgetError("exhaustive balanced-asymmetry check capped at N = 10");
  }
  if (opts.mode == SubsetCheckOptions::Mode::kSampled) exhaustive = false;

  PropertyCertificate cert;
  cert.property = "balanced-asymmetry";
  cert.bound = psi;
  cert.holds = true;
  cert.method = exhaustive ? CheckMethod::kExhaustive : CheckMethod::kSampled;

  auto test = [&](AgentSet m1, AgentSet m2) {
    const double lhs = cross_sum(a.data(), m1.complement(n), m2);
    const double rhs = psi * cross_sum(a.data(), m1, m2.complement(n));
    if (lhs > rhs + opts.tol) {
      cert.holds = false;
      Witness w;
      w.set_a = m1;
      w.set_b = m2;
      w.lhs = lhs;
      w.rhs = rhs;
      cert.witness = w;
      return false;
    }
    return true;
  };

  if (exhaustive) {
    // Pairs with |M1| = |M2| = k; k = 0 and k = N are vacuous.
    for (int k = 1; k < n; ++k) {
      const auto masks = subsets_of_size(n, k);
      for (std::uint64_t m1 : masks) {
        for (std::uint64_t m2 : masks) {
          if (!test(AgentSet(m1), AgentSet(m2))) return cert;
        }
      }
    }
  } else {
    Rng rng(opts.seed);
    for (int s = 0; s < opts.samples; ++s) {
      const int k = 1 + rng.index(n - 1);
      const AgentSet m1 = random_subset_of_size(rng, n, k);
      const AgentSet m2 = random_subset_of_size(rng, n, k);
      if (!test(m1, m2)) return cert;
    }
  }
  return cert;
}

PropertyCertificate check_weak_aperiodicity(const StochasticMatrix& a,
                                            double gamma, double tol) {
  if (gamma <= 0.0) throw ParamError("weak-aperiodicity bound must be positive");
  const int n = a.size();
  PropertyCertificate cert;
  cert.property = "weak-aperiodicity";
  cert.bound = gamma;
  cert.holds = true;
  cert.method = CheckMethod::kExhaustive;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || a(i, j) == 0.0) continue;  // vacuous pair
      double best = 0.0;
      for (int l = 0; l < n; ++l) best = std::max(best, a(l, i) * a(l, j));
      if (best + tol < gamma * a(i, j)) {
        cert.holds = false;
        Witness w;
        w.i = i;
        w.j = j;
        w.lhs = best;
        w.rhs = gamma * a(i, j);
        cert.witness = w;
        return cert;
      }
    }
  }
  return cert;
}

double max_weak_aperiodicity(const StochasticMatrix& a) {
  const int n = a.size();
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || a(i, j) == 0.0) continue;
      double best = 0.0;
      for (int l = 0; l < n; ++l) best = std::max(best, a(l, i) * a(l, j));
      worst = std::min(worst, best / a(i, j));
    }
  }
  return worst;
}

double pstar_estimate(const ChainSpec& spec, Step t) {
  if (t < 1) throw ParamError("pstar horizon must be >= 1");
  const AbsProbApprox pi = backward_abs_prob(spec, t);
  double best = std::numeric_limits<double>::infinity();
  for (Step n = 0; n <= t; ++n) best = std::min(best, pi.at(n).minCoeff());
  return best;
}

}  // namespace jetflow
