#pragma once

// Test-only references. Nothing here calls into the solvers under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "otmorph/token_set.hpp"

namespace otmorph::testing {

inline double pair_cost(const TokenSet& a, std::size_t i, const TokenSet& b, std::size_t j) {
  double s = 0.0;
  for (std::size_t d = 0; d < a.dim(); ++d) {
    const double diff = a.points()(i, d) - b.points()(j, d);
    s += diff * diff;
  }
  return s;
}

struct OracleMatch {
  std::vector<std::size_t> perm;
  double cost = 0.0;  // sum over matched pairs, not divided by n
};

/// Exact min-cost perfect matching by dynamic programming over subsets of
/// columns, O(n^2 2^n). Feasible up to n of about 20.
inline OracleMatch subset_dp_matching(const TokenSet& a, const TokenSet& b) {
  const std::size_t n = a.size();
  const std::size_t full = std::size_t{1} << n;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> best(full, kInf);
  std::vector<std::uint8_t> choice(full, 0);
  best[0] = 0.0;
  for (std::size_t mask = 0; mask < full; ++mask) {
    if (best[mask] == kInf) continue;
    const auto row = static_cast<std::size_t>(__builtin_popcountll(mask));
    if (row == n) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask & (std::size_t{1} << j)) continue;
      const std::size_t next = mask | (std::size_t{1} << j);
      const double c = best[mask] + pair_cost(a, row, b, j);
      if (c < best[next]) {
        best[next] = c;
        choice[next] = static_cast<std::uint8_t>(j);
      }
    }
  }
  OracleMatch out;
  out.perm.assign(n, 0);
  out.cost = best[full - 1];
  std::size_t mask = full - 1;
  for (std::size_t row = n; row-- > 0;) {
    const std::size_t j = choice[mask];
    out.perm[row] = j;
    mask &= ~(std::size_t{1} << j);
  }
  return out;
}

/// Enumerates all n! permutations; returns the best one and the runner-up cost.
inline OracleMatch permutation_matching(const TokenSet& a, const TokenSet& b, double* runner_up = nullptr) {
  const std::size_t n = a.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  OracleMatch best{perm, std::numeric_limits<double>::infinity()};
  double second = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += pair_cost(a, i, b, perm[i]);
    if (s < best.cost) {
      second = best.cost;
      best = {perm, s};
    } else if (s < second) {
      second = s;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (runner_up) *runner_up = second;
  return best;
}

/// Optimal permutation from an oracle independent of the library solvers.
inline OracleMatch oracle_matching(const TokenSet& a, const TokenSet& b) {
  return a.size() <= 7 ? permutation_matching(a, b) : subset_dp_matching(a, b);
}

/// Largest coordinate error after greedily pairing each expected point with
/// the nearest unused actual point. Returns +inf on size mismatch.
inline double multiset_distance(const Matrix& actual, const Matrix& expected) {
  if (actual.rows() != expected.rows() || actual.cols() != expected.cols()) {
    return std::numeric_limits<double>::infinity();
  }
  std::vector<char> used(actual.rows(), 0);
  double worst = 0.0;
  for (std::size_t e = 0; e < expected.rows(); ++e) {
    std::size_t pick = actual.rows();
    double pick_err = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < actual.rows(); ++a) {
      if (used[a]) continue;
      double err = 0.0;
      for (std::size_t d = 0; d < actual.cols(); ++d) {
        err = std::max(err, std::abs(actual(a, d) - expected(e, d)));
      }
      if (err < pick_err) {
        pick_err = err;
        pick = a;
      }
    }
    used[pick] = 1;
    worst = std::max(worst, pick_err);
  }
  return worst;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) {
    worst = std::max(worst, std::abs(a.data()[k] - b.data()[k]));
  }
  return worst;
}

/// Uniform token set with coordinates in [-scale, scale).
inline TokenSet random_tokens(std::mt19937_64& rng, std::size_t n, std::size_t d, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix m(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < d; ++c) m(i, c) = u(rng);
  }
  return TokenSet(std::move(m));
}

/// Random strictly positive weights summing to one.
inline std::vector<double> random_weights(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (double& x : w) total += (x = u(rng));
  for (double& x : w) x /= total;
  // push rounding residue into the last entry
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) s += w[i];
  w.back() = 1.0 - s;
  return w;
}

inline Matrix displacement_interpolant(const TokenSet& x, const TokenSet& y,
                                       const std::vector<std::size_t>& perm, double beta) {
  Matrix out(x.size(), x.dim());
  for (std::size_t k = 0; k < x.size(); ++k) {
    for (std::size_t d = 0; d < x.dim(); ++d) {
      out(k, d) = (1.0 - beta) * x.points()(k, d) + beta * y.points()(perm[k], d);
    }
  }
  return out;
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-12});
}

}  // namespace otmorph::testing
