#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "jetflow/matrix.hpp"

namespace jetflow {

using Step = std::int64_t;

enum class TailPolicy { kRepeatLast, kCycle, kIdentity };

/// Pure step -> matrix source backing generator chains. Implementations
/// must be deterministic in (params, seed, step).
class MatrixSource {
 public:
  virtual ~MatrixSource() = default;
  virtual int agents() const = 0;
  virtual StochasticMatrix at(Step n) const = 0;
  virtual const std::string& family() const = 0;
  virtual std::uint64_t seed() const = 0;
  virtual const std::map<std::string, double>& params() const = 0;
};

/// Finite description of an infinite matrix sequence {A(n)}.
///
/// Four kinds: a single constant matrix, a periodic cycle, an explicit
/// prefix with a mandatory tail policy, and a seeded generator family.
/// matrix_at(spec, n) is total and deterministic for every n >= 0.
class ChainSpec {
 public:
  static ChainSpec constant(StochasticMatrix a);
  static ChainSpec periodic(std::vector<StochasticMatrix> mats);
  static ChainSpec explicit_list(std::vector<StochasticMatrix> mats,
                                 TailPolicy tail);
  static ChainSpec generator(std::shared_ptr<const MatrixSource> source);

  int agents() const { return agents_; }
  StochasticMatrix at(Step n) const;

  enum class Kind { kStatic, kPeriodic, kExplicit, kGenerator };
  Kind kind() const { return kind_; }

  /// Member matrices for static/periodic/explicit kinds.
  const std::vector<StochasticMatrix>& matrices() const { return mats_; }
  TailPolicy tail() const { return tail_; }
  const MatrixSource& source() const { return *source_; }

 private:
  ChainSpec() = default;
  Kind kind_ = Kind::kStatic;
  int agents_ = 0;
  std::vector<StochasticMatrix> mats_;
  TailPolicy tail_ = TailPolicy::kRepeatLast;
  std::shared_ptr<const MatrixSource> source_;
};

/// A(n) of the chain; total for all n >= 0.
StochasticMatrix matrix_at(const ChainSpec& spec, Step n);

/// Backward product A(n) A(n-1) ... A(n0). Requires n >= n0 >= 0.
/// Row sums are re-checked with tolerance 1e-7 * (n - n0 + 1).
StochasticMatrix backward_product(const ChainSpec& spec, Step n0, Step n);

}  // namespace jetflow
