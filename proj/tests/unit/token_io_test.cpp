#include <filesystem>
#include <random>

#include "gtest/gtest.h"
#include "otmorph/ot/assignment.hpp"
#include "otmorph/synthetic.hpp"
#include "otmorph/token_io.hpp"
#include "support/oracles.hpp"

namespace otmorph {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("otmorph_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

TokenSet awkward_set(std::mt19937_64& rng, std::size_t n, std::size_t d, bool weighted) {
  auto t = testing::random_tokens(rng, n, d, 1e3);
  Matrix m = t.points();
  m(0, 0) = 0.1;  // not exactly representable
  if (n * d > 1) m.row(n - 1)[d - 1] = -1.0 / 3.0;
  if (!weighted) return TokenSet(std::move(m));
  return TokenSet(std::move(m), testing::random_weights(rng, n), 1e-12);
}

// Property: both encodings round-trip bit-exactly and agree with each other.
TEST(TokenIoProperty, RoundTripBothFormats) {
  std::mt19937_64 rng(60);
  const auto dir = scratch_dir("roundtrip");
  for (int trial = 0; trial < 25; ++trial) {
    const auto s = awkward_set(rng, 1 + trial % 9, 1 + trial % 4, trial % 2 == 1);
    write_tokens(dir / "t.json", s, TokenFormat::kJson);
    write_tokens(dir / "t.bmt", s, TokenFormat::kBinary);
    const auto from_json = read_tokens(dir / "t.json");
    const auto from_bin = read_tokens(dir / "t.bmt");
    EXPECT_EQ(from_json, s);
    EXPECT_EQ(from_bin, s);
  }
}

TEST(TokenIoTest, BinaryLayout) {
  const auto s = TokenSet::from_rows({{1.0, -2.0}});
  const std::string bytes = encode_binary(s, false);
  ASSERT_EQ(bytes.size(), 4u + 4 + 4 + 1 + 16);
  EXPECT_EQ(bytes.substr(0, 4), "BMT1");
  EXPECT_EQ(bytes[4], 1);  // n little-endian
  EXPECT_EQ(bytes[8], 2);  // d
  EXPECT_EQ(bytes[12], 0);
  // 1.0 = 0x3FF0000000000000, little-endian
  EXPECT_EQ(static_cast<unsigned char>(bytes[13 + 7]), 0x3Fu);
  EXPECT_EQ(static_cast<unsigned char>(bytes[13 + 6]), 0xF0u);
}

TEST(TokenIoTest, DistinctErrors) {
  const auto s = TokenSet::from_rows({{1.0}, {2.0}});
  std::string bytes = encode_binary(s, false);

  try {
    decode_binary("XMT1" + bytes.substr(4));
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadMagic);
  }
  try {
    decode_binary(bytes.substr(0, bytes.size() - 3));
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTruncated);
  }
  const TokenSet bad_weights_set(s.points(), {0.5, 0.5});
  std::string weighted = encode_binary(bad_weights_set, true);
  // rewrite the second weight to 0.4 so the sum is 0.9
  const auto bits = std::bit_cast<std::uint64_t>(0.4);
  for (int b = 0; b < 8; ++b) weighted[weighted.size() - 8 + b] = static_cast<char>((bits >> (8 * b)) & 0xFF);
  EXPECT_THROW(decode_binary(weighted), InvalidWeightsError);

  EXPECT_THROW(decode_json(R"({"n":2,"d":1,"points":[[0],[1]],"weights":[0.5,0.4]})"), InvalidWeightsError);
  try {
    decode_json(R"({"n":3,"d":1,"points":[[0],[1]]})");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTruncated);
  }
  try {
    decode_json("{not json");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformed);
  }
  EXPECT_THROW(read_tokens("/nonexistent/otmorph/file.json"), IoError);
}

TEST(TokenIoTest, FileWeightsWithinLooseToleranceAreRenormalized) {
  const auto t = decode_json(R"({"n":2,"d":1,"points":[[0],[1]],"weights":[0.5,0.5000000004]})");
  EXPECT_NEAR(t.weight(0) + t.weight(1), 1.0, 1e-15);
}

TEST(SyntheticTest, SeedDeterminism) {
  for (auto kind : {SyntheticKind::kGaussianBlob, SyntheticKind::kRing, SyntheticKind::kTwoClusterSwapPair}) {
    EXPECT_EQ(gen_synthetic(kind, 10, 3, 42), gen_synthetic(kind, 10, 3, 42));
    EXPECT_NE(gen_synthetic(kind, 10, 3, 42), gen_synthetic(kind, 10, 3, 43));
  }
  EXPECT_EQ(parse_synthetic_kind("ring"), SyntheticKind::kRing);
  EXPECT_FALSE(parse_synthetic_kind("spiral"));
}

TEST(SyntheticTest, RejectsBadShapes) {
  EXPECT_THROW(gaussian_blob(0, 2, 1), ArgumentError);
  EXPECT_THROW(gaussian_blob(3, 0, 1), ArgumentError);
  EXPECT_THROW(ring(4, 1, 1), ArgumentError);
  EXPECT_THROW(two_cluster_swap_pair(5, 2, 1), ArgumentError);
}

TEST(SyntheticTest, SwapFixtureSeparatesLerpFromTransport) {
  const auto [x, y] = two_cluster_swap_pair(20, 3, 9);
  // Index-wise lerp at the midpoint drops every token into the gap.
  const auto mid = lerp_tokens(x, y, 0.5);
  for (std::size_t k = 0; k < mid.size(); ++k) EXPECT_LT(std::abs(mid.points()(k, 0)), 0.5 * kSwapClusterOffset);
  // The optimal coupling keeps every token within its cluster.
  const auto match = testing::subset_dp_matching(x, y);
  for (std::size_t k = 0; k < x.size(); ++k) {
    EXPECT_EQ(x.points()(k, 0) < 0.0, y.points()(match.perm[k], 0) < 0.0);
  }
}

}  // namespace
}  // namespace otmorph
