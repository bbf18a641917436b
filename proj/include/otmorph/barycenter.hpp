#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "otmorph/ot/exact_ot.hpp"

namespace otmorph {

inline constexpr std::size_t kDefaultMaxIterations = 100;
inline constexpr double kDefaultStopThreshold = 1e-5;

struct BarycenterConfig {
  std::size_t max_iterations = kDefaultMaxIterations;
  /// Mean squared support displacement between consecutive iterates.
  double stop_threshold = kDefaultStopThreshold;
  /// One weight per input measure; empty means "uniform over the inputs".
  std::vector<double> measure_weights;

  void validate(std::size_t measure_count) const {
    if (max_iterations < 1) throw ArgumentError("max_iterations must be at least 1");
    if (!(stop_threshold > 0.0) || !std::isfinite(stop_threshold)) {
      throw ArgumentError("stop_threshold must be positive");
    }
    if (measure_weights.empty()) return;
    if (measure_weights.size() != measure_count) {
      throw ArgumentError("measure_weights has " + std::to_string(measure_weights.size()) +
                          " entries for " + std::to_string(measure_count) + " measures");
    }
    double total = 0.0;
    for (double w : measure_weights) {
      if (!(w >= 0.0)) throw InvalidWeightsError("measure weights must be nonnegative");
      total += w;
    }
    if (std::abs(total - 1.0) > kWeightSumTolerance) {
      throw InvalidWeightsError("measure weights must sum to 1");
    }
  }
};

struct BarycenterResult {
  TokenSet support;
  std::size_t iterations_used = 0;
  bool converged = false;
  /// Weighted sum of W2^2 to the inputs at the returned support.
  double objective = 0.0;
  /// Objective at each iterate that was fed to an OT solve (before its update).
  std::vector<double> objective_history;
  std::vector<double> per_iteration_displacement;
};

namespace detail {

inline double mean_squared_displacement(const Matrix& a, const Matrix& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.rows(); ++k) s += squared_distance(a.row(k), b.row(k));
  return s / static_cast<double>(a.rows());
}

struct BarycenterStep {
  std::vector<TransportPlan> plans;
  double objective = 0.0;
};

inline BarycenterStep transport_to_measures(const TokenSet& support,
                                            const std::vector<TokenSet>& measures,
                                            const std::vector<double>& lambda) {
  BarycenterStep step;
  step.plans.reserve(measures.size());
  for (std::size_t i = 0; i < measures.size(); ++i) {
    step.plans.push_back(solve_exact_ot(support, measures[i]));
    step.objective += lambda[i] * step.plans.back().total_cost;
  }
  return step;
}

}  // namespace detail

/// Free-support Wasserstein barycenter by fixed-point iteration.
///
/// Each iteration couples the current support to every input measure with
/// exact OT, then moves each support point to the lambda-weighted barycentric
/// projection of its plan rows. Support weights stay uniform (1/n) and the
/// support size is that of `init`. A support point with zero row mass in some
/// plan skips that measure and renormalizes the remaining lambdas.
inline BarycenterResult free_support_barycenter(const std::vector<TokenSet>& measures,
                                                const TokenSet& init,
                                                const BarycenterConfig& config = {}) {
  if (measures.empty()) throw ArgumentError("barycenter needs at least one measure");
  config.validate(measures.size());
  for (const auto& mu : measures) require_same_dim(mu, init);

  std::vector<double> lambda = config.measure_weights;
  if (lambda.empty()) lambda.assign(measures.size(), 1.0 / static_cast<double>(measures.size()));

  const std::size_t n = init.size();
  const std::size_t dim = init.dim();
  BarycenterResult result{TokenSet(init.points()), 0, false, 0.0, {}, {}};

  for (std::size_t it = 0; it < config.max_iterations; ++it) {
    const auto step = detail::transport_to_measures(result.support, measures, lambda);
    result.objective_history.push_back(step.objective);

    Matrix next(n, dim, 0.0);
    std::vector<double> acc(dim);
    for (std::size_t k = 0; k < n; ++k) {
      std::fill(acc.begin(), acc.end(), 0.0);
      double used_lambda = 0.0;
      for (std::size_t i = 0; i < measures.size(); ++i) {
        if (lambda[i] == 0.0) continue;
        const Matrix& plan = step.plans[i].coupling;
        double row_mass = 0.0;
        for (std::size_t j = 0; j < plan.cols(); ++j) row_mass += plan(k, j);
        if (!(row_mass > 0.0)) continue;
        const Matrix& y = measures[i].points();
        for (std::size_t j = 0; j < plan.cols(); ++j) {
          const double g = plan(k, j);
          if (g == 0.0) continue;
          const double coeff = lambda[i] * (g / row_mass);
          for (std::size_t d = 0; d < dim; ++d) acc[d] += coeff * y(j, d);
        }
        used_lambda += lambda[i];
      }
      if (used_lambda > 0.0) {
        for (std::size_t d = 0; d < dim; ++d) next(k, d) = acc[d] / used_lambda;
      } else {
        for (std::size_t d = 0; d < dim; ++d) next(k, d) = result.support.points()(k, d);
      }
    }

    const double displacement =
        detail::mean_squared_displacement(next, result.support.points());
    result.per_iteration_displacement.push_back(displacement);
    result.support = TokenSet(std::move(next));
    result.iterations_used = it + 1;
    if (displacement < config.stop_threshold) {
      result.converged = true;
      break;
    }
  }

  result.objective = detail::transport_to_measures(result.support, measures, lambda).objective;
  return result;
}

/// Barycenter of (source, target) with weights (1 - beta, beta).
inline BarycenterResult pairwise_barycenter(const TokenSet& source, const TokenSet& target,
                                            double beta, const TokenSet& init,
                                            BarycenterConfig config = {}) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw ArgumentError("beta must lie in [0, 1], got " + std::to_string(beta));
  }
  config.measure_weights = {1.0 - beta, beta};
  return free_support_barycenter({source, target}, init, config);
}

}  // namespace otmorph
