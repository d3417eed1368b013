#include "jetflow/chain.hpp"

namespace jetflow {

ChainSpec ChainSpec::constant(StochasticMatrix a) {
  ChainSpec s;
  s.kind_ = Kind::kStatic;
  s.agents_ = a.size();
  s.mats_.push_back(std::move(a));
  return s;
}

ChainSpec ChainSpec::periodic(std::vector<StochasticMatrix> mats) {
  if (mats.empty()) throw ParamError("periodic chain needs at least one matrix");
  ChainSpec s;
  s.kind_ = Kind::kPeriodic;
  s.agents_ = mats.front().size();
  for (const auto& m : mats) {
    if (m.size() != s.agents_) {
      throw DimensionError("periodic chain matrices differ in size");
    }
  }
  s.mats_ = std::move(mats);
  return s;
}

ChainSpec ChainSpec::explicit_list(std::vector<StochasticMatrix> mats,
                                   TailPolicy tail) {
  if (mats.empty()) throw ParamError("explicit chain needs at least one matrix");
  ChainSpec s;
  s.kind_ = Kind::kExplicit;
  s.agents_ = mats.front().size();
  for (const auto& m : mats) {
    if (m.size() != s.agents_) {
      throw DimensionError("explicit chain matrices differ in size");
    }
  }
  s.mats_ = std::move(mats);
  s.tail_ = tail;
  return s;
}

ChainSpec ChainSpec::generator(std::shared_ptr<const MatrixSource> source) {
  ChainSpec s;
  s.kind_ = Kind::kGenerator;
  s.agents_ = source->agents();
  s.source_ = std::move(source);
  return s;
}

StochasticMatrix ChainSpec::at(Step n) const {
  if (n < 0) throw ParamError("step index must be nonnegative");
  switch (kind_) {
    case Kind::kStatic:
      return mats_.front();
    case Kind::kPeriodic:
      return mats_[static_cast<std::size_t>(n % static_cast<Step>(mats_.size()))];
    case Kind::kExplicit: {
      const auto len = static_cast<Step>(mats_.size());
      if (n < len) return mats_[static_cast<std::size_t>(n)];
      switch (tail_) {
        case TailPolicy::kRepeatLast:
          return mats_.back();
        case TailPolicy::kCycle:
          return mats_[static_cast<std::size_t>(n % len)];
        case TailPolicy::kIdentity:
          return StochasticMatrix::identity(agents_);
      }
      return mats_.back();
    }
    case Kind::kGenerator:
      return source_->at(n);
  }
  throw Error("unreachable chain kind");
}

StochasticMatrix matrix_at(const ChainSpec& spec, Step n) { return spec.at(n); }

StochasticMatrix backward_product(const ChainSpec& spec, Step n0, Step n) {
  if (n0 < 0 || n < n0) throw ParamError("backward product needs n >= n0 >= 0");
  Eigen::MatrixXd prod = spec.at(n0).data();
  for (Step k = n0 + 1; k <= n; ++k) {
    prod = spec.at(k).data() * prod;
  }
  const double tol = 1e-7 * static_cast<double>(n - n0 + 1);
  return StochasticMatrix::validated(std::move(prod), tol);
}

}  // namespace jetflow
