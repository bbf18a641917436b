#include <numeric>
#include <random>

#include "gtest/gtest.h"
#include "otmorph/synthetic.hpp"
#include "otmorph/trajectory.hpp"
#include "support/oracles.hpp"

namespace otmorph {
namespace {

using testing::displacement_interpolant;
using testing::max_abs_diff;
using testing::random_tokens;

constexpr InitMode kAllModes[] = {InitMode::kSequential, InitMode::kLinearInit, InitMode::kNaiveLerp};

MorphConfig config_for(InitMode mode, std::size_t J = 6) {
  MorphConfig c;
  c.intermediate_frames = J;
  c.init_mode = mode;
  return c;
}

TEST(MorphConfigTest, BetaGrid) {
  const MorphConfig c;
  EXPECT_EQ(c.intermediate_frames, 6u);
  EXPECT_EQ(c.frame_count(), 8u);
  for (std::size_t a = 0; a < 8; ++a) EXPECT_EQ(c.beta(a), static_cast<double>(a) / 7.0);
  EXPECT_EQ(c.beta(0), 0.0);
  EXPECT_EQ(c.beta(7), 1.0);
}

TEST(InitModeTest, NamesRoundTrip) {
  for (auto m : kAllModes) EXPECT_EQ(parse_init_mode(init_mode_name(m)), m);
  EXPECT_FALSE(parse_init_mode("cubic").has_value());
}

TEST(MorphGeometryTest, IdentityMorphInEveryMode) {
  std::mt19937_64 rng(1);
  const auto x = random_tokens(rng, 7, 3);
  for (auto mode : kAllModes) {
    const auto t = morph_geometry(x, x, config_for(mode));
    ASSERT_EQ(t.frames.size(), 8u);
    for (const auto& f : t.frames) EXPECT_LT(max_abs_diff(f.points(), x.points()), 1e-9);
    for (double s : step_lengths(t)) EXPECT_LT(s, 1e-9);
    const auto [e0, e1] = endpoint_errors(t, x, x);
    EXPECT_LT(e0, 1e-9);
    EXPECT_LT(e1, 1e-9);
  }
}

TEST(MorphGeometryTest, DiracPathIsEquallySpaced) {
  const auto x = TokenSet::from_rows({{0, 0}});
  const auto y = TokenSet::from_rows({{7, 0}});
  for (auto mode : kAllModes) {
    const auto t = morph_geometry(x, y, config_for(mode));
    ASSERT_EQ(t.frames.size(), 8u);
    for (std::size_t a = 0; a < 8; ++a) {
      EXPECT_NEAR(t.frames[a].points()(0, 0), static_cast<double>(a), 1e-9);
      EXPECT_EQ(t.frames[a].points()(0, 1), 0.0);
    }
    for (double s : t.steps) EXPECT_NEAR(s, 1.0, 1e-9);
  }
}

TEST(MorphGeometryTest, Errors) {
  const auto a = TokenSet::from_rows({{0, 0}, {1, 1}});
  EXPECT_THROW(morph_geometry(a, TokenSet::from_rows({{0, 0}}), {}), DimensionError);
  EXPECT_THROW(morph_geometry(a, TokenSet::from_rows({{0}, {1}}), {}), DimensionError);
  const TokenSet weighted(a.points(), {0.25, 0.75});
  EXPECT_THROW(morph_geometry(weighted, a, {}), InvalidWeightsError);
  MorphConfig bad;
  bad.barycenter.max_iterations = 0;
  EXPECT_THROW(morph_geometry(a, a, bad), ArgumentError);
}

TEST(MorphGeometryTest, FrameFailureReportsAlpha) {
  const FrameError e(3, SolverError("boom"));
  EXPECT_EQ(e.alpha(), 3u);
  EXPECT_EQ(e.code(), ErrorCode::kSolverFailure);
  EXPECT_NE(std::string(e.what()).find("frame 3"), std::string::npos);
}

TEST(MorphGeometryTest, NaiveLerpStartsAtSource) {
  std::mt19937_64 rng(2);
  const auto x = random_tokens(rng, 6, 2), y = random_tokens(rng, 6, 2);
  const auto t = morph_geometry(x, y, config_for(InitMode::kNaiveLerp));
  EXPECT_EQ(t.frames.front().points(), x.points());
  EXPECT_EQ(endpoint_errors(t, x, y).first, 0.0);
  for (const auto& d : t.diagnostics) EXPECT_EQ(d.iterations_used, 0u);
}

TEST(MorphGeometryTest, ZeroIntermediateFrames) {
  std::mt19937_64 rng(3);
  const auto x = random_tokens(rng, 5, 2), y = random_tokens(rng, 5, 2);
  const auto t = morph_geometry(x, y, config_for(InitMode::kSequential, 0));
  ASSERT_EQ(t.frames.size(), 2u);
  EXPECT_EQ(t.betas, (std::vector<double>{0.0, 1.0}));
}

TEST(StepLengthsTest, NeedsTwoFrames) {
  EXPECT_THROW(step_lengths(std::vector<TokenSet>{TokenSet::from_rows({{0}})}), ArgumentError);
}

TEST(TrajectoryProperty, SequentialIsStraightAndExactAtEndpoints) {
  std::mt19937_64 rng(40);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 2 + trial % 12, d = 1 + trial % 5;
    const auto x = random_tokens(rng, n, d), y = random_tokens(rng, n, d);
    const auto t = morph_geometry(x, y, config_for(InitMode::kSequential));
    const auto sigma = testing::oracle_matching(x, y);

    ASSERT_EQ(t.frames.size(), 8u);
    for (std::size_t a = 0; a < t.frames.size(); ++a) {
      EXPECT_EQ(t.frames[a].size(), n);
      EXPECT_TRUE(t.diagnostics[a].converged);
      // Sequential warm starts keep token k on its own path.
      EXPECT_LT(max_abs_diff(t.frames[a].points(), displacement_interpolant(x, y, sigma.perm, t.betas[a])), 1e-5);
    }
    const auto [e0, e1] = endpoint_errors(t, x, y);
    EXPECT_LT(e0, 1e-6);
    EXPECT_LT(e1, 1e-6);
    const double mean = std::accumulate(t.steps.begin(), t.steps.end(), 0.0) / t.steps.size();
    for (double s : t.steps) EXPECT_NEAR(s, mean, 1e-4 * mean);
    EXPECT_GE(std::accumulate(t.steps.begin(), t.steps.end(), 0.0) + 1e-12, w2_distance(t.frames.front(), t.frames.back()));
  }
}

TEST(TrajectoryProperty, BetasStrictlyIncrease) {
  std::mt19937_64 rng(41);
  const auto x = random_tokens(rng, 4, 2), y = random_tokens(rng, 4, 2);
  for (std::size_t J : {0u, 1u, 6u, 11u}) {
    const auto t = morph_geometry(x, y, config_for(InitMode::kLinearInit, J));
    ASSERT_EQ(t.frames.size(), J + 2);
    for (std::size_t a = 1; a < t.betas.size(); ++a) EXPECT_LT(t.betas[a - 1], t.betas[a]);
  }
}

TEST(TrajectoryProperty, SequentialBeatsLinearInitOnSwapFixture) {
  const auto [x, y] = two_cluster_swap_pair(16, 2, 7);
  const auto seq = morph_geometry(x, y, config_for(InitMode::kSequential));
  const auto lin = morph_geometry(x, y, config_for(InitMode::kLinearInit));
  const double r_seq = step_ratio(seq.steps), r_lin = step_ratio(lin.steps);
  EXPECT_LE(r_seq, 2.0);
  EXPECT_LE(r_seq, r_lin);
  for (double s : seq.steps) EXPECT_LE(s, 2.0 * seq.steps.front());
}

}  // namespace
}  // namespace otmorph
