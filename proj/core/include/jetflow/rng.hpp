#pragma once

#include <cstdint>

namespace jetflow {

/// Counter-based deterministic RNG (SplitMix64 stream).
///
/// Chains realize their step-n matrix from an engine seeded by
/// mix(seed, n), so matrix_at is random-access deterministic: querying
/// step 7 gives the same matrix whether or not steps 0..6 were realized.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Engine for one (seed, counter) cell, independent of query order.
  static Rng at_step(std::uint64_t seed, std::int64_t counter) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL *
                                 (static_cast<std::uint64_t>(counter) + 1);
    return Rng(mix64(mix64(z)));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be positive.
  int index(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

  /// Fisher-Yates permutation of {0..n-1} written into out[0..n-1].
  template <typename Vec>
  void permutation(int n, Vec& out) {
    for (int i = 0; i < n; ++i) out[i] = i;
    for (int i = n - 1; i > 0; --i) {
      int j = index(i + 1);
      auto t = out[i];
      out[i] = out[j];
      out[j] = t;
    }
  }

  /// FNV-1a hash of a string, for mixing family names into seeds.
  static std::uint64_t hash_name(const char* s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (; *s; ++s) {
      h ^= static_cast<unsigned char>(*s);
      h *= 0x100000001b3ULL;
    }
    return h;
  }

 private:
  static std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace jetflow
