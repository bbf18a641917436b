#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "otmorph/trajectory.hpp"

namespace otmorph {

inline constexpr double kDefaultTau = 0.3;
inline constexpr double kZeroNormTolerance = 1e-12;

struct TokenDecision {
  std::size_t nearest_source = 0;
  std::size_t nearest_target = 0;
  double sim = 0.0;
  bool kept_barycenter = false;
};

struct SelectionReport {
  TokenSet output;
  std::vector<TokenDecision> decisions;
  double tau = kDefaultTau;

  std::size_t copied_count() const {
    std::size_t c = 0;
    for (const auto& d : decisions) c += d.kept_barycenter ? 0 : 1;
    return c;
  }
};

/// Index of the closest token (squared Euclidean); ties go to the smaller index.
inline std::size_t nearest_token(std::span<const double> point, const TokenSet& set) {
  if (set.size() == 0) throw ArgumentError("nearest_token: empty set");
  if (point.size() != set.dim()) {
    throw DimensionError("nearest_token: point has dimension " + std::to_string(point.size()) +
                         ", set has " + std::to_string(set.dim()));
  }
  std::size_t best = 0;
  double best_d = squared_distance(point, set.point(0));
  for (std::size_t k = 1; k < set.size(); ++k) {
    const double d = squared_distance(point, set.point(k));
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

/// Cosine similarity; 0 when either vector has (near) zero norm.
inline double cosine_similarity(std::span<const double> x, std::span<const double> y) {
  double dot = 0.0, nx = 0.0, ny = 0.0;
  for (std::size_t d = 0; d < x.size(); ++d) {
    dot += x[d] * y[d];
    nx += x[d] * x[d];
    ny += y[d] * y[d];
  }
  nx = std::sqrt(nx);
  ny = std::sqrt(ny);
  if (nx < kZeroNormTolerance || ny < kZeroNormTolerance) return 0.0;
  return std::clamp(dot / (nx * ny), -1.0, 1.0);
}

/// Texture-branch token selection. For each barycenter token z_k find the
/// nearest source token x_i and nearest target token y_j; keep z_k when
/// 1 - cos(x_i, y_j) > tau, otherwise copy x_i.
inline SelectionReport selective_texture_tokens(const TokenSet& z, const TokenSet& source,
                                                const TokenSet& target, double tau = kDefaultTau) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw ArgumentError("tau must lie in [0, 1], got " + std::to_string(tau));
  }
  require_same_dim(z, source);
  require_same_dim(z, target);

  Matrix out(z.size(), z.dim());
  std::vector<TokenDecision> decisions;
  decisions.reserve(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) {
    TokenDecision d;
    d.nearest_source = nearest_token(z.point(k), source);
    d.nearest_target = nearest_token(z.point(k), target);
    d.sim = cosine_similarity(source.point(d.nearest_source), target.point(d.nearest_target));
    d.kept_barycenter = 1.0 - d.sim > tau;
    const auto chosen = d.kept_barycenter ? z.point(k) : source.point(d.nearest_source);
    std::copy(chosen.begin(), chosen.end(), out.row(k).begin());
    decisions.push_back(d);
  }
  return SelectionReport{TokenSet(std::move(out), z.weights()), std::move(decisions), tau};
}

/// Applies the selection rule to every frame of a geometry trajectory.
inline std::vector<SelectionReport> morph_texture(const MorphTrajectory& trajectory,
                                                  const TokenSet& source, const TokenSet& target,
                                                  double tau = kDefaultTau) {
  std::vector<SelectionReport> reports;
  reports.reserve(trajectory.frames.size());
  for (const auto& frame : trajectory.frames) {
    reports.push_back(selective_texture_tokens(frame, source, target, tau));
  }
  return reports;
}

}  // namespace otmorph
