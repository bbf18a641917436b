#pragma once

// Closed-form and exhaustive references used to cross-check the solvers.

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "otmorph/ot/cost_matrix.hpp"

namespace otmorph {

inline constexpr std::size_t kBruteForceMaxTokens = 8;

namespace detail {
inline void require_uniform_pair(const TokenSet& a, const TokenSet& b, const char* who) {
  require_same_dim(a, b);
  if (a.size() != b.size()) throw DimensionError(std::string(who) + ": sizes must match");
  if (!a.is_uniform() || !b.is_uniform()) {
    throw InvalidWeightsError(std::string(who) + ": uniform weights required");
  }
}
}  // namespace detail

/// min over all n! permutations of (1/n) sum_i |a_i - b_sigma(i)|^2.
inline double brute_force_ot_uniform(const TokenSet& a, const TokenSet& b) {
  detail::require_uniform_pair(a, b, "brute_force_ot_uniform");
  const std::size_t n = a.size();
  if (n > kBruteForceMaxTokens) {
    throw ArgumentError("brute_force_ot_uniform: n > " + std::to_string(kBruteForceMaxTokens));
  }
  const CostMatrix c = cost_matrix(a, b);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += c(i, perm[i]);
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(n);
}

/// 1-D closed form: matching sorted atoms is optimal for convex costs.
inline double sorted_1d_ot(const TokenSet& a, const TokenSet& b) {
  if (a.dim() != 1 || b.dim() != 1) throw DimensionError("sorted_1d_ot: dimension must be 1");
  detail::require_uniform_pair(a, b, "sorted_1d_ot");
  std::vector<double> xa = a.points().data();
  std::vector<double> xb = b.points().data();
  std::sort(xa.begin(), xa.end());
  std::sort(xb.begin(), xb.end());
  double s = 0.0;
  for (std::size_t k = 0; k < xa.size(); ++k) s += (xa[k] - xb[k]) * (xa[k] - xb[k]);
  return s / static_cast<double>(xa.size());
}

}  // namespace otmorph
