#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "otmorph/token_set.hpp"

namespace otmorph {

enum class TokenFormat { kJson, kBinary };

/// Weight-sum tolerance accepted when decoding a file.
inline constexpr double kFileWeightTolerance = 1e-9;
inline constexpr std::string_view kBinaryMagic = "BMT1";

inline std::optional<TokenFormat> parse_token_format(std::string_view name) {
  if (name == "json") return TokenFormat::kJson;
  if (name == "binary" || name == "bin" || name == "bmt") return TokenFormat::kBinary;
  return std::nullopt;
}

inline std::string_view token_format_extension(TokenFormat f) {
  return f == TokenFormat::kJson ? ".json" : ".bmt";
}

namespace detail {

// Files may carry weights that sum to 1 within kFileWeightTolerance; they are
// renormalized when the stricter in-memory tolerance would reject them.
inline TokenSet make_token_set(Matrix points, std::optional<std::vector<double>> weights) {
  if (!weights) return TokenSet(std::move(points));
  double total = 0.0;
  for (double w : *weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw InvalidWeightsError("token file weights must be strictly positive");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > kFileWeightTolerance) {
    throw InvalidWeightsError("token file weights sum to " + std::to_string(total));
  }
  if (std::abs(total - 1.0) > kWeightSumTolerance) {
    for (double& w : *weights) w /= total;
  }
  return TokenSet(std::move(points), std::move(*weights), kFileWeightTolerance);
}

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFFu));
}

inline void put_f64(std::string& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xFFu));
}

class ByteReader {
 public:
  explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

  std::uint64_t read_le(std::size_t width) {
    if (bytes_.size() - pos_ < width) {
      throw FormatError(ErrorCode::kTruncated, "token file truncated at byte " + std::to_string(pos_));
    }
    std::uint64_t v = 0;
    for (std::size_t b = 0; b < width; ++b) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + b])) << (8 * b);
    }
    pos_ += width;
    return v;
  }
  double read_f64() { return std::bit_cast<double>(read_le(8)); }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Binary layout, all little-endian: "BMT1", u32 n, u32 d, u8 has_weights,
/// n*d f64 row-major coordinates, then n f64 weights when has_weights == 1.
inline std::string encode_binary(const TokenSet& set, bool with_weights) {
  std::string out(kBinaryMagic);
  detail::put_u32(out, static_cast<std::uint32_t>(set.size()));
  detail::put_u32(out, static_cast<std::uint32_t>(set.dim()));
  out.push_back(with_weights ? 1 : 0);
  for (double v : set.points().data()) detail::put_f64(out, v);
  if (with_weights) {
    for (double w : set.weights()) detail::put_f64(out, w);
  }
  return out;
}

inline TokenSet decode_binary(std::string_view bytes) {
  if (bytes.size() < kBinaryMagic.size() || bytes.substr(0, kBinaryMagic.size()) != kBinaryMagic) {
    throw FormatError(ErrorCode::kBadMagic, "token file does not start with BMT1");
  }
  detail::ByteReader in(bytes.substr(kBinaryMagic.size()));
  const auto n = static_cast<std::size_t>(in.read_le(4));
  const auto d = static_cast<std::size_t>(in.read_le(4));
  const auto flag = in.read_le(1);
  if (flag > 1) throw FormatError(ErrorCode::kMalformed, "weights flag must be 0 or 1");
  if (n == 0 || d == 0) throw FormatError(ErrorCode::kMalformed, "token file declares an empty set");
  const std::size_t expected = (n * d + (flag ? n : 0)) * 8;
  if (in.remaining() < expected) {
    throw FormatError(ErrorCode::kTruncated, "token file payload truncated: need " +
                                                 std::to_string(expected) + " bytes, have " +
                                                 std::to_string(in.remaining()));
  }
  if (in.remaining() > expected) throw FormatError(ErrorCode::kMalformed, "trailing bytes in token file");
  std::vector<double> flat(n * d);
  for (double& v : flat) v = in.read_f64();
  std::optional<std::vector<double>> weights;
  if (flag) {
    weights.emplace(n);
    for (double& w : *weights) w = in.read_f64();
  }
  return detail::make_token_set(Matrix(n, d, std::move(flat)), std::move(weights));
}

inline std::string encode_json(const TokenSet& set, bool with_weights) {
  nlohmann::ordered_json j;
  j["n"] = set.size();
  j["d"] = set.dim();
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto p = set.point(i);
    rows.push_back(std::vector<double>(p.begin(), p.end()));
  }
  j["points"] = std::move(rows);
  if (with_weights) j["weights"] = set.weights();
  return j.dump() + "\n";
}

inline TokenSet decode_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(ErrorCode::kMalformed, std::string("token JSON: ") + e.what());
  }
  try {
    const auto& rows = j.at("points");
    const std::size_t n = j.contains("n") ? j.at("n").get<std::size_t>() : rows.size();
    const std::size_t d = j.contains("d") ? j.at("d").get<std::size_t>()
                                          : (rows.empty() ? 0 : rows.at(0).size());
    if (n == 0 || d == 0) throw FormatError(ErrorCode::kMalformed, "token JSON declares an empty set");
    if (rows.size() != n) {
      throw FormatError(ErrorCode::kTruncated, "token JSON has " + std::to_string(rows.size()) +
                                                   " rows, header says " + std::to_string(n));
    }
    std::vector<double> flat;
    flat.reserve(n * d);
    for (const auto& r : rows) {
      if (r.size() != d) throw FormatError(ErrorCode::kTruncated, "token JSON row length != d");
      for (const auto& v : r) flat.push_back(v.get<double>());
    }
    std::optional<std::vector<double>> weights;
    if (j.contains("weights")) {
      weights = j.at("weights").get<std::vector<double>>();
      if (weights->size() != n) throw FormatError(ErrorCode::kTruncated, "token JSON weights length != n");
    }
    return detail::make_token_set(Matrix(n, d, std::move(flat)), std::move(weights));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(ErrorCode::kMalformed, std::string("token JSON: ") + e.what());
  }
}

inline std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file_bytes(const std::filesystem::path& path, std::string_view bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path.string());
}

/// Decodes either format; binary is recognised by its magic, anything
/// starting with '{' is JSON.
inline TokenSet decode_tokens(std::string_view bytes) {
  const auto first = bytes.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && bytes[first] == '{') return decode_json(bytes);
  return decode_binary(bytes);
}

inline TokenSet read_tokens(const std::filesystem::path& path) { return decode_tokens(read_file_bytes(path)); }

/// Weights are stored only for non-uniform sets.
inline void write_tokens(const std::filesystem::path& path, const TokenSet& set, TokenFormat format) {
  const bool with_weights = !set.is_uniform();
  write_file_bytes(path, format == TokenFormat::kJson ? encode_json(set, with_weights)
                                                      : encode_binary(set, with_weights));
}

}  // namespace otmorph
