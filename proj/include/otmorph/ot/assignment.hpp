#pragma once

#include <limits>
#include <vector>

#include "otmorph/ot/cost_matrix.hpp"

namespace otmorph {

struct Assignment {
  /// column matched to each row
  std::vector<std::size_t> row_to_col;
  double cost = 0.0;
};

/// Minimum-cost perfect matching on a square cost matrix.
///
/// Shortest augmenting paths with dual potentials (Hungarian / Jonker-Volgenant
/// family), O(n^3). Rows are inserted in index order and the first minimal
/// column wins every scan, so ties resolve toward the smallest index.
inline Assignment solve_assignment(const CostMatrix& c) {
  const std::size_t n = c.rows();
  if (n != c.cols()) {
    throw DimensionError("assignment needs a square cost matrix, got " + std::to_string(c.rows()) +
                         "x" + std::to_string(c.cols()));
  }
  if (n == 0) return {};

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based rows/cols; column 0 is the virtual source of each augmenting path.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> owner(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    owner[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = owner[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = c(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      if (j1 == 0) throw SolverError("assignment: no augmenting column found");
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment out;
  out.row_to_col.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) out.row_to_col[owner[j] - 1] = j - 1;
  for (std::size_t i = 0; i < n; ++i) out.cost += c(i, out.row_to_col[i]);
  return out;
}

}  // namespace otmorph
