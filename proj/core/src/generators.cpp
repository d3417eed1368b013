#include "jetflow/generators.hpp"

#include <cmath>
#include <limits>

#include "jetflow/properties.hpp"
#include "jetflow/rng.hpp"

namespace jetflow {

namespace {

constexpr int kRejectionBudget = 1000;

Eigen::MatrixXd random_doubly_stochastic(Rng& rng, int n, int k) {
  std::vector<double> w(static_cast<std::size_t>(k));
  double total = 0.0;
  for (int p = 0; p < k; ++p) {
    w[static_cast<std::size_t>(p)] = -std::log(1.0 - rng.uniform());
    total += w[static_cast<std::size_t>(p)];
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int p = 0; p < k; ++p) {
    rng.permutation(n, perm);
    const double wp = w[static_cast<std::size_t>(p)] / total;
    for (int i = 0; i < n; ++i) a(i, perm[static_cast<std::size_t>(i)]) += wp;
  }
  return a;
}

class FamilySource : public MatrixSource {
 public:
  FamilySource(std::string family, int n, std::uint64_t seed,
               std::map<std::string, double> params)
      : family_(std::move(family)), n_(n), seed_(seed),
        params_(std::move(params)),
        step_key_(seed ^ Rng::hash_name(family_.c_str())) {}

  int agents() const override { return n_; }
  const std::string& family() const override { return family_; }
  std::uint64_t seed() const override { return seed_; }
  const std::map<std::string, double>& params() const override {
    return params_;
  }

  StochasticMatrix at(Step n) const override {
    int rejected = 0;
    return realize(n, rejected);
  }

  virtual StochasticMatrix realize(Step n, int& rejected) const = 0;

 protected:
  Rng step_rng(Step n) const { return Rng::at_step(step_key_, n); }
  double param(const std::string& key) const { return params_.at(key); }

  std::string family_;
  int n_;
  std::uint64_t seed_;
  std::map<std::string, double> params_;
  std::uint64_t step_key_;
};

class DoublyStochasticSource : public FamilySource {
 public:
  DoublyStochasticSource(int n, std::uint64_t seed)
      : FamilySource("doubly_stochastic", n, seed, {}) {}

  StochasticMatrix realize(Step step, int& rejected) const override {
    rejected = 0;
    Rng rng = step_rng(step);
    return StochasticMatrix::validated(random_doubly_stochastic(rng, n_, n_));
  }
};

class SelfConfidentCutBalancedSource : public FamilySource {
 public:
  SelfConfidentCutBalancedSource(int n, std::uint64_t seed, double delta,
                                 double psi, int blocks)
      : FamilySource("self_confident_cut_balanced", n, seed,
                     {{"delta", delta}, {"psi", psi},
                      {"blocks", static_cast<double>(blocks)}}),
        delta_(delta), psi_(psi), blocks_(blocks) {
    if (!(delta > 0.0 && delta < 1.0)) {
      throw ParamError("min-diagonal must lie in (0, 1)");
    }
    if (psi < 1.0) throw ParamError("cut-balance bound must be >= 1");
    if (blocks < 1 || blocks > n) {
      throw ParamError("block count must lie in [1, n]");
    }
  }

  StochasticMatrix realize(Step step, int& rejected) const override {
    Rng rng = step_rng(step);
    for (rejected = 0; rejected < kRejectionBudget; ++rejected) {
      Eigen::MatrixXd a = draw(rng);
      if (verify(a)) return StochasticMatrix::validated(std::move(a));
    }
    throw SamplingError(step, kRejectionBudget);
  }

 private:
  Eigen::MatrixXd draw(Rng& rng) const {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n_, n_);
    // Contiguous near-equal blocks; support never crosses them.
    const int base = n_ / blocks_;
    const int extra = n_ % blocks_;
    int start = 0;
    for (int b = 0; b < blocks_; ++b) {
      const int size = base + (b < extra ? 1 : 0);
      for (int i = start; i < start + size; ++i) {
        for (int j = i + 1; j < start + size; ++j) {
          if (rng.uniform() >= 0.5) continue;
          const double scale = rng.uniform(0.1, 1.0);
          const double ratio = std::pow(psi_, 2.0 * rng.uniform() - 1.0);
          w(i, j) = scale * std::sqrt(ratio);
          w(j, i) = scale / std::sqrt(ratio);
        }
      }
      start += size;
    }
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_; ++i) {
      const double s = w.row(i).sum();
      if (s > 0.0) worst = std::min(worst, (1.0 - delta_) / s);
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
    if (std::isfinite(worst)) a = worst * w;
    for (int i = 0; i < n_; ++i) a(i, i) = 1.0 - a.row(i).sum();
    return a;
  }

  bool verify(const Eigen::MatrixXd& a) const {
    for (int i = 0; i < n_; ++i) {
      if (a(i, i) < delta_ - 1e-12) return false;
    }
    SubsetCheckOptions opts;
    if (n_ > 6) {
      opts.mode = SubsetCheckOptions::Mode::kSampled;
      opts.samples = 200;
      opts.seed = step_key_;
    }
    return check_cut_balance(StochasticMatrix::validated(a), psi_, opts).holds;
  }

  double delta_;
  double psi_;
  int blocks_;
};

class TwoLeaderSource : public FamilySource {
 public:
  TwoLeaderSource(int n, std::uint64_t seed)
      : FamilySource("two_leader", n, seed, {}) {
    if (n < 2) throw ParamError("two-leader family needs n >= 2");
  }

  StochasticMatrix realize(Step step, int& rejected) const override {
    rejected = 0;
    Rng rng = step_rng(step);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
    const int first = (n_ + 1) / 2;
    fill_block(rng, a, 0, first);
    fill_block(rng, a, first, n_ - first);
    return StochasticMatrix::validated(std::move(a));
  }

 private:
  static void fill_block(Rng& rng, Eigen::MatrixXd& a, int start, int size) {
    if (size == 1) {
      a(start, start) = 1.0;
      return;
    }
    const Eigen::MatrixXd d = random_doubly_stochastic(rng, size, size);
    a.block(start, start, size, size) =
        0.5 * Eigen::MatrixXd::Identity(size, size) + 0.5 * d;
  }
};

class BalancedAsymmetricSource : public FamilySource {
 public:
  BalancedAsymmetricSource(int n, std::uint64_t seed, double psi, int kperms,
                           double jitter)
      : FamilySource("balanced_asymmetric", n, seed,
                     {{"psi", psi}, {"kperms", static_cast<double>(kperms)},
                      {"jitter", jitter}}),
        psi_(psi), kperms_(kperms), jitter_(jitter) {
    if (n < 2) throw ParamError("balanced-asymmetric family needs n >= 2");
    if (psi < 1.0) throw ParamError("balance bound must be >= 1");
    if (kperms < 1 || kperms > n) {
      throw ParamError("permutation count must lie in [1, n]");
    }
    if (jitter < 0.0) throw ParamError("jitter must be nonnegative");
  }

  StochasticMatrix realize(Step step, int& rejected) const override {
    Rng rng = step_rng(step);
    for (rejected = 0; rejected < kRejectionBudget; ++rejected) {
      Eigen::MatrixXd d = random_doubly_stochastic(rng, n_, kperms_);
      std::vector<int> sigma(static_cast<std::size_t>(n_));
      rng.permutation(n_, sigma);
      Eigen::MatrixXd a(n_, n_);
      for (int i = 0; i < n_; ++i) {
        a.row(i) = d.row(sigma[static_cast<std::size_t>(i)]);
      }
      if (jitter_ > 0.0) {
        for (int i = 0; i < n_; ++i) {
          for (int j = 0; j < n_; ++j) a(i, j) += jitter_ * rng.uniform();
          a.row(i) /= a.row(i).sum();
        }
      }
      if (verify(a)) return StochasticMatrix::validated(std::move(a));
    }
    throw SamplingError(step, kRejectionBudget);
  }

 private:
  bool verify(const Eigen::MatrixXd& a) const {
    SubsetCheckOptions opts;
    if (n_ > 6) {
      opts.mode = SubsetCheckOptions::Mode::kSampled;
      opts.samples = 300;
      opts.seed = step_key_;
    }
    return check_balanced_asymmetry(StochasticMatrix::validated(a), psi_, opts)
        .holds;
  }

  double psi_;
  int kperms_;
  double jitter_;
};

}  // namespace

ChainSpec gen_doubly_stochastic(int n, std::uint64_t seed) {
  if (n < 2) throw ParamError("doubly stochastic family needs n >= 2");
  return ChainSpec::generator(std::make_shared<DoublyStochasticSource>(n, seed));
}

ChainSpec gen_self_confident_cut_balanced(int n, std::uint64_t seed,
                                          double delta, double psi,
                                          int blocks) {
  return ChainSpec::generator(std::make_shared<SelfConfidentCutBalancedSource>(
      n, seed, delta, psi, blocks));
}

ChainSpec gen_two_leader(int n, std::uint64_t seed) {
  return ChainSpec::generator(std::make_shared<TwoLeaderSource>(n, seed));
}

ChainSpec gen_periodic_swap(int n) {
  if (n != 2) throw ParamError("the swap fixture is defined for n = 2 only");
  Eigen::MatrixXd swap(2, 2);
  swap << 0, 1, 1, 0;
  return ChainSpec::constant(StochasticMatrix::validated(std::move(swap)));
}

ChainSpec gen_balanced_asymmetric(int n, std::uint64_t seed, double psi,
                                  int kperms, double jitter) {
  if (kperms < 0) kperms = n;
  return ChainSpec::generator(std::make_shared<BalancedAsymmetricSource>(
      n, seed, psi, kperms, jitter));
}

int rejections_at(const ChainSpec& spec, Step n) {
  if (spec.kind() != ChainSpec::Kind::kGenerator) return 0;
  const auto* fam = dynamic_cast<const FamilySource*>(&spec.source());
  if (fam == nullptr) return 0;
  int rejected = 0;
  fam->realize(n, rejected);
  return rejected;
}

namespace {

double param_or(const std::map<std::string, double>& params,
                const std::string& key, double fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void reject_unknown(const std::map<std::string, double>& params,
                    std::initializer_list<const char*> known) {
  for (const auto& [key, value] : params) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ParamError("unknown generator parameter: " + key);
  }
}

}  // namespace

ChainSpec make_chain(const std::string& family, int n, std::uint64_t seed,
                     const std::map<std::string, double>& params) {
  if (family == "doubly_stochastic") {
    reject_unknown(params, {});
    return gen_doubly_stochastic(n, seed);
  }
  if (family == "self_confident_cut_balanced") {
    reject_unknown(params, {"delta", "psi", "blocks"});
    return gen_self_confident_cut_balanced(
        n, seed, param_or(params, "delta", 0.3), param_or(params, "psi", 2.0),
        static_cast<int>(param_or(params, "blocks", 1.0)));
  }
  if (family == "two_leader") {
    reject_unknown(params, {});
    return gen_two_leader(n, seed);
  }
  if (family == "periodic_swap") {
    reject_unknown(params, {});
    return gen_periodic_swap(n);
  }
  if (family == "balanced_asymmetric") {
    reject_unknown(params, {"psi", "kperms", "jitter"});
    return gen_balanced_asymmetric(
        n, seed, param_or(params, "psi", 1.0),
        static_cast<int>(param_or(params, "kperms", -1.0)),
        param_or(params, "jitter", 0.0));
  }
  throw ParamError("unknown chain family: " + family);
}

std::vector<std::string> list_families() {
  return {"doubly_stochastic", "self_confident_cut_balanced", "two_leader",
          "periodic_swap", "balanced_asymmetric"};
}

}  // namespace jetflow
