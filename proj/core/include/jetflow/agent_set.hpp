#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "jetflow/error.hpp"

namespace jetflow {

/// Subset of agents {0..N-1}, N <= 64, as a bitmask.
class AgentSet {
 public:
  constexpr AgentSet() = default;
  constexpr explicit AgentSet(std::uint64_t bits) : bits_(bits) {}

  static AgentSet of(std::initializer_list<int> agents) {
    AgentSet s;
    for (int a : agents) s.add(a);
    return s;
  }

  static AgentSet from_indices(const std::vector<int>& agents) {
    AgentSet s;
    for (int a : agents) s.add(a);
    return s;
  }

  static constexpr AgentSet single(int i) { return AgentSet(1ULL << i); }

  static constexpr AgentSet full(int n) {
    return AgentSet(n >= 64 ? ~0ULL : (1ULL << n) - 1);
  }

  constexpr bool contains(int i) const { return (bits_ >> i) & 1ULL; }
  void add(int i) { bits_ |= 1ULL << i; }
  void remove(int i) { bits_ &= ~(1ULL << i); }

  constexpr int count() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint64_t mask() const { return bits_; }

  constexpr AgentSet complement(int n) const {
    return AgentSet(~bits_ & full(n).bits_);
  }
  constexpr AgentSet operator&(AgentSet o) const { return AgentSet(bits_ & o.bits_); }
  constexpr AgentSet operator|(AgentSet o) const { return AgentSet(bits_ | o.bits_); }
  constexpr AgentSet minus(AgentSet o) const { return AgentSet(bits_ & ~o.bits_); }

  constexpr bool disjoint(AgentSet o) const { return (bits_ & o.bits_) == 0; }
  constexpr bool subset_of(AgentSet o) const { return (bits_ & ~o.bits_) == 0; }

  /// Nonempty strict subset of {0..n-1}.
  constexpr bool proper(int n) const {
    return bits_ != 0 && bits_ != full(n).bits_;
  }

  int smallest() const { return std::countr_zero(bits_); }

  std::vector<int> indices() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(count()));
    for (std::uint64_t b = bits_; b;) {
      int i = std::countr_zero(b);
      out.push_back(i);
      b &= b - 1;
    }
    return out;
  }

  constexpr bool operator==(const AgentSet&) const = default;

 private:
  std::uint64_t bits_ = 0;
};

}  // namespace jetflow
