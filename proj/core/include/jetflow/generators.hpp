#pragma once

#include <map>
#include <string>
#include <vector>

#include "jetflow/chain.hpp"

namespace jetflow {

/// Chain families used as fixtures. Each family draws its step-n matrix
/// from a counter-based engine keyed on (family, seed, n), so chains are
/// random-access deterministic and reproducible across runs.

/// Random convex combination of up to n permutation matrices per step;
/// every realized matrix is doubly stochastic.
ChainSpec gen_doubly_stochastic(int n, std::uint64_t seed);

/// Symmetric random support with pairwise weight ratios in [1/psi, psi]
/// and the diagonal absorbing the remainder, so every matrix has
/// diagonal >= delta and is cut-balanced with bound psi. With blocks > 1
/// the support stays inside fixed contiguous blocks (zero cross flow).
ChainSpec gen_self_confident_cut_balanced(int n, std::uint64_t seed,
                                          double delta, double psi,
                                          int blocks = 1);

/// Block-diagonal chain with two fixed blocks mixing internally and
/// receiving zero influence from each other; both blocks are leaders.
ChainSpec gen_two_leader(int n, std::uint64_t seed);

/// The 2-agent swap matrix as a constant chain; its backward products
/// alternate and never converge.
ChainSpec gen_periodic_swap(int n);

/// Row-permuted doubly stochastic draws (balanced asymmetric with bound
/// 1), optionally jittered and re-verified against `psi` with rejection.
/// kperms < 0 means "use n"; kperms = 1 gives pure permutation chains.
ChainSpec gen_balanced_asymmetric(int n, std::uint64_t seed, double psi = 1.0,
                                  int kperms = -1, double jitter = 0.0);

/// Rejection-sampling retries at one step (0 for unconstrained families);
/// deterministic per (spec, step).
int rejections_at(const ChainSpec& spec, Step n);

/// CLI entry point: construct a family by name with named parameters.
ChainSpec make_chain(const std::string& family, int n, std::uint64_t seed,
                     const std::map<std::string, double>& params);

std::vector<std::string> list_families();

}  // namespace jetflow
