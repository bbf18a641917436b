#pragma once

#include <cmath>
#include <string>

#include "otmorph/ot/assignment.hpp"
#include "otmorph/ot/cost_matrix.hpp"
#include "otmorph/ot/transport_simplex.hpp"

namespace otmorph {

inline constexpr double kMarginalTolerance = 1e-9;

struct TransportPlan {
  Matrix coupling;
  double total_cost = 0.0;
};

enum class OtMethod {
  kAuto,            ///< assignment when both sides are uniform with equal size
  kNetworkSimplex,  ///< general transportation simplex
  kAssignment,      ///< requires uniform weights and equal sizes
};

/// Largest absolute violation of either marginal constraint.
inline double marginal_violation(const Matrix& coupling, const TokenSet& a, const TokenSet& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < coupling.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < coupling.cols(); ++j) s += coupling(i, j);
    worst = std::max(worst, std::abs(s - a.weight(i)));
  }
  for (std::size_t j = 0; j < coupling.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < coupling.rows(); ++i) s += coupling(i, j);
    worst = std::max(worst, std::abs(s - b.weight(j)));
  }
  return worst;
}

inline double plan_cost(const Matrix& coupling, const CostMatrix& cost) {
  double total = 0.0;
  for (std::size_t i = 0; i < coupling.rows(); ++i) {
    for (std::size_t j = 0; j < coupling.cols(); ++j) {
      const double g = coupling(i, j);
      if (g != 0.0) total += g * cost(i, j);
    }
  }
  return total;
}

/// Exact optimal coupling between two discrete measures under the squared
/// Euclidean cost. Deterministic for a fixed input.
inline TransportPlan solve_exact_ot(const TokenSet& a, const TokenSet& b, const CostMatrix& cost,
                                    OtMethod method = OtMethod::kAuto) {
  require_same_dim(a, b);
  if (cost.rows() != a.size() || cost.cols() != b.size()) {
    throw DimensionError("cost matrix shape does not match token sets");
  }
  const bool assignable = a.size() == b.size() && a.is_uniform() && b.is_uniform();
  if (method == OtMethod::kAssignment && !assignable) {
    throw ArgumentError("assignment path needs uniform weights and equal sizes");
  }

  TransportPlan plan;
  if (method == OtMethod::kAssignment || (method == OtMethod::kAuto && assignable)) {
    const Assignment match = solve_assignment(cost);
    const double mass = 1.0 / static_cast<double>(a.size());
    plan.coupling = Matrix(a.size(), b.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) plan.coupling(i, match.row_to_col[i]) = mass;
  } else {
    TransportSimplex simplex(a.weights(), b.weights(), cost);
    simplex.solve();
    plan.coupling = simplex.flow();
  }

  const double violation = marginal_violation(plan.coupling, a, b);
  if (!(violation <= kMarginalTolerance)) {
    throw SolverError("transport plan violates marginals by " + std::to_string(violation));
  }
  plan.total_cost = plan_cost(plan.coupling, cost);
  return plan;
}

inline TransportPlan solve_exact_ot(const TokenSet& a, const TokenSet& b,
                                    OtMethod method = OtMethod::kAuto) {
  return solve_exact_ot(a, b, cost_matrix(a, b), method);
}

/// 2-Wasserstein distance: square root of the optimal squared-Euclidean cost.
inline double w2_distance(const TokenSet& a, const TokenSet& b, OtMethod method = OtMethod::kAuto) {
  return std::sqrt(std::max(0.0, solve_exact_ot(a, b, method).total_cost));
}

}  // namespace otmorph
