#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "otmorph/barycenter.hpp"

namespace otmorph {

inline constexpr std::size_t kDefaultIntermediateFrames = 6;

enum class InitMode {
  kSequential,  ///< warm start from the previous frame's converged support
  kLinearInit,  ///< each frame from the index-wise lerp, optimized independently
  kNaiveLerp,   ///< index-wise lerp, no optimization
};

inline std::string_view init_mode_name(InitMode mode) {
  switch (mode) {
    case InitMode::kSequential: return "sequential";
    case InitMode::kLinearInit: return "linear-init";
    case InitMode::kNaiveLerp: return "naive-lerp";
  }
  return "sequential";
}

inline std::optional<InitMode> parse_init_mode(std::string_view name) {
  if (name == "sequential") return InitMode::kSequential;
  if (name == "linear-init" || name == "linear_init") return InitMode::kLinearInit;
  if (name == "naive-lerp" || name == "naive_lerp") return InitMode::kNaiveLerp;
  return std::nullopt;
}

struct MorphConfig {
  /// Intermediate frame count J; the trajectory holds J + 2 frames.
  std::size_t intermediate_frames = kDefaultIntermediateFrames;
  InitMode init_mode = InitMode::kSequential;
  BarycenterConfig barycenter;

  std::size_t frame_count() const { return intermediate_frames + 2; }
  double beta(std::size_t alpha) const {
    return static_cast<double>(alpha) / static_cast<double>(intermediate_frames + 1);
  }
};

struct FrameDiagnostics {
  std::size_t iterations_used = 0;
  bool converged = true;
  double objective = 0.0;
};

struct MorphTrajectory {
  std::vector<TokenSet> frames;
  std::vector<double> betas;
  std::vector<FrameDiagnostics> diagnostics;
  /// W2 between consecutive frames.
  std::vector<double> steps;
};

/// Thrown when a frame's barycenter solve fails; carries the frame index.
class FrameError : public Error {
 public:
  FrameError(std::size_t alpha, const Error& cause)
      : Error(cause.code(), "frame " + std::to_string(alpha) + ": " + cause.what()),
        alpha_(alpha) {}
  std::size_t alpha() const noexcept { return alpha_; }

 private:
  std::size_t alpha_;
};

/// W2(Z_a, Z_{a+1}) for each consecutive pair of frames.
inline std::vector<double> step_lengths(const std::vector<TokenSet>& frames) {
  if (frames.size() < 2) throw ArgumentError("step_lengths needs at least two frames");
  std::vector<double> out;
  out.reserve(frames.size() - 1);
  for (std::size_t a = 0; a + 1 < frames.size(); ++a) out.push_back(w2_distance(frames[a], frames[a + 1]));
  return out;
}

inline std::vector<double> step_lengths(const MorphTrajectory& t) { return step_lengths(t.frames); }

/// (W2(Z_0, source), W2(Z_last, target)).
inline std::pair<double, double> endpoint_errors(const MorphTrajectory& t, const TokenSet& source,
                                                 const TokenSet& target) {
  return {w2_distance(t.frames.front(), source), w2_distance(t.frames.back(), target)};
}

/// max step / mean step; 1 for a uniformly paced trajectory, 0 when static.
inline double step_ratio(const std::vector<double>& steps) {
  if (steps.empty()) return 0.0;
  double total = 0.0, worst = 0.0;
  for (double s : steps) {
    total += s;
    worst = std::max(worst, s);
  }
  const double mean = total / static_cast<double>(steps.size());
  return mean > 0.0 ? worst / mean : 0.0;
}

/// Geometry branch: frames Z_0 .. Z_{J+1} at beta = alpha / (J + 1).
inline MorphTrajectory morph_geometry(const TokenSet& source, const TokenSet& target,
                                      const MorphConfig& config = {}) {
  require_same_dim(source, target);
  if (source.size() != target.size()) {
    throw DimensionError("morph needs equal token counts: " + std::to_string(source.size()) +
                         " vs " + std::to_string(target.size()));
  }
  if (!source.is_uniform() || !target.is_uniform()) {
    throw InvalidWeightsError("morph needs uniformly weighted token sets");
  }
  config.barycenter.validate(2);

  MorphTrajectory out;
  const std::size_t frames = config.frame_count();
  out.frames.reserve(frames);
  for (std::size_t alpha = 0; alpha < frames; ++alpha) {
    const double beta = config.beta(alpha);
    out.betas.push_back(beta);
    if (config.init_mode == InitMode::kNaiveLerp) {
      out.frames.push_back(lerp_tokens(source, target, beta));
      const double objective = (1.0 - beta) * solve_exact_ot(out.frames.back(), source).total_cost +
                               beta * solve_exact_ot(out.frames.back(), target).total_cost;
      out.diagnostics.push_back({0, false, objective});
      continue;
    }
    const TokenSet init = config.init_mode == InitMode::kSequential
                              ? (alpha == 0 ? source : out.frames.back())
                              : lerp_tokens(source, target, beta);
    try {
      auto result = pairwise_barycenter(source, target, beta, init, config.barycenter);
      out.diagnostics.push_back({result.iterations_used, result.converged, result.objective});
      out.frames.push_back(std::move(result.support));
    } catch (const Error& e) {
      throw FrameError(alpha, e);
    }
  }
  out.steps = step_lengths(out.frames);
  return out;
}

}  // namespace otmorph
