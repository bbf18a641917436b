#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "otmorph/token_set.hpp"

namespace otmorph {

enum class SyntheticKind { kGaussianBlob, kTwoClusterSwapPair, kRing };

inline std::optional<SyntheticKind> parse_synthetic_kind(std::string_view name) {
  if (name == "gaussian_blob" || name == "gaussian-blob") return SyntheticKind::kGaussianBlob;
  if (name == "two_cluster_swap_pair" || name == "two-cluster-swap-pair") {
    return SyntheticKind::kTwoClusterSwapPair;
  }
  if (name == "ring") return SyntheticKind::kRing;
  return std::nullopt;
}

inline std::string_view synthetic_kind_name(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::kGaussianBlob: return "gaussian_blob";
    case SyntheticKind::kTwoClusterSwapPair: return "two_cluster_swap_pair";
    case SyntheticKind::kRing: return "ring";
  }
  return "gaussian_blob";
}

/// mt19937_64 with hand-rolled uniform/normal transforms: the standard
/// distributions are implementation-defined, these are bit-stable everywhere.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in (0, 1).
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  double normal() {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double phi = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(phi);
    return r * std::cos(phi);
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// Cluster centres of the swap fixture sit at -/+ this along axis 0.
inline constexpr double kSwapClusterOffset = 5.0;
inline constexpr double kSwapClusterSpread = 0.25;

namespace detail {
inline void check_synthetic_shape(std::size_t n, std::size_t d) {
  if (n == 0) throw ArgumentError("synthetic: n must be at least 1");
  if (d == 0) throw ArgumentError("synthetic: d must be at least 1");
}
}  // namespace detail

/// n standard-normal tokens in R^d.
inline TokenSet gaussian_blob(std::size_t n, std::size_t d, std::uint64_t seed) {
  detail::check_synthetic_shape(n, d);
  SeededRng rng(seed);
  Matrix pts(n, d);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t c = 0; c < d; ++c) pts(k, c) = rng.normal();
  }
  return TokenSet(std::move(pts));
}

/// n tokens near the unit circle in the first two coordinates, small noise
/// elsewhere. Needs d >= 2.
inline TokenSet ring(std::size_t n, std::size_t d, std::uint64_t seed) {
  detail::check_synthetic_shape(n, d);
  if (d < 2) throw ArgumentError("synthetic ring needs d >= 2");
  SeededRng rng(seed);
  Matrix pts(n, d);
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    const double radius = 1.0 + 0.05 * rng.normal();
    pts(k, 0) = radius * std::cos(angle);
    pts(k, 1) = radius * std::sin(angle);
    for (std::size_t c = 2; c < d; ++c) pts(k, c) = 0.05 * rng.normal();
  }
  return TokenSet(std::move(pts));
}

/// Adversarial fixture for initialization ablations. The source holds n/2
/// tokens around cluster A (axis 0 at -offset) followed by n/2 around B
/// (+offset); the target lists B first and A second, each with fresh
/// jitter. Index-wise interpolation therefore crosses the gap while optimal
/// transport stays within clusters. Needs even n.
inline std::pair<TokenSet, TokenSet> two_cluster_swap_pair(std::size_t n, std::size_t d,
                                                           std::uint64_t seed) {
  detail::check_synthetic_shape(n, d);
  if (n % 2 != 0) throw ArgumentError("two_cluster_swap_pair needs an even n");
  SeededRng rng(seed);
  auto fill = [&](bool a_first) {
    Matrix pts(n, d);
    for (std::size_t k = 0; k < n; ++k) {
      const bool in_a = (k < n / 2) == a_first;
      for (std::size_t c = 0; c < d; ++c) pts(k, c) = kSwapClusterSpread * rng.normal();
      pts(k, 0) += in_a ? -kSwapClusterOffset : kSwapClusterOffset;
    }
    return TokenSet(std::move(pts));
  };
  TokenSet source = fill(true);
  TokenSet target = fill(false);
  return {std::move(source), std::move(target)};
}

/// One set for blob/ring, (source, target) for the swap pair.
inline std::vector<TokenSet> gen_synthetic(SyntheticKind kind, std::size_t n, std::size_t d,
                                           std::uint64_t seed) {
  switch (kind) {
    case SyntheticKind::kGaussianBlob: return {gaussian_blob(n, d, seed)};
    case SyntheticKind::kRing: return {ring(n, d, seed)};
    case SyntheticKind::kTwoClusterSwapPair: {
      auto [s, t] = two_cluster_swap_pair(n, d, seed);
      return {std::move(s), std::move(t)};
    }
  }
  throw ArgumentError("unknown synthetic kind");
}

}  // namespace otmorph
