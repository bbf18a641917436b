#pragma once

#include "otmorph/token_set.hpp"

namespace otmorph {

/// Pairwise ground cost between two token sets. The metric is always the
/// squared Euclidean distance.
struct CostMatrix {
  Matrix values;

  std::size_t rows() const noexcept { return values.rows(); }
  std::size_t cols() const noexcept { return values.cols(); }
  double operator()(std::size_t i, std::size_t j) const { return values(i, j); }
  double max_entry() const {
    double m = 0.0;
    for (double v : values.data()) m = v > m ? v : m;
    return m;
  }
};

inline CostMatrix cost_matrix(const TokenSet& a, const TokenSet& b) {
  require_same_dim(a, b);
  Matrix values(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto x = a.point(i);
    for (std::size_t j = 0; j < b.size(); ++j) values(i, j) = squared_distance(x, b.point(j));
  }
  return CostMatrix{std::move(values)};
}

}  // namespace otmorph
