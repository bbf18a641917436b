#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "otmorph/errors.hpp"

namespace otmorph {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw DimensionError("matrix payload has " + std::to_string(data_.size()) +
                           " values, expected " + std::to_string(rows_ * cols_));
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  const std::vector<double>& data() const noexcept { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline constexpr double kWeightSumTolerance = 1e-12;

/// A discrete probability measure: n atoms in R^m with strictly positive
/// weights summing to one.
class TokenSet {
 public:
  /// Uniform weights 1/n.
  explicit TokenSet(Matrix points) : points_(std::move(points)) {
    check_points();
    weights_.assign(points_.rows(), 1.0 / static_cast<double>(points_.rows()));
  }

  TokenSet(Matrix points, std::vector<double> weights, double sum_tolerance = kWeightSumTolerance)
      : points_(std::move(points)), weights_(std::move(weights)) {
    check_points();
    if (weights_.size() != points_.rows()) {
      throw DimensionError("weights length " + std::to_string(weights_.size()) +
                           " does not match token count " + std::to_string(points_.rows()));
    }
    double total = 0.0;
    for (double w : weights_) {
      if (!(w > 0.0) || !std::isfinite(w)) {
        throw InvalidWeightsError("token weights must be strictly positive and finite");
      }
      total += w;
    }
    if (std::abs(total - 1.0) > sum_tolerance) {
      throw InvalidWeightsError("token weights sum to " + std::to_string(total) + ", expected 1");
    }
  }

  static TokenSet from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw ArgumentError("token set needs at least one token");
    const std::size_t dim = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * dim);
    for (const auto& r : rows) {
      if (r.size() != dim) throw DimensionError("ragged token rows");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return TokenSet(Matrix(rows.size(), dim, std::move(flat)));
  }

  std::size_t size() const noexcept { return points_.rows(); }
  std::size_t dim() const noexcept { return points_.cols(); }

  const Matrix& points() const noexcept { return points_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::span<const double> point(std::size_t i) const { return points_.row(i); }
  double weight(std::size_t i) const { return weights_[i]; }

  /// True when every weight is bit-identical to 1/n.
  bool is_uniform() const {
    const double u = 1.0 / static_cast<double>(size());
    for (double w : weights_) {
      if (w != u) return false;
    }
    return true;
  }

  bool operator==(const TokenSet&) const = default;

 private:
  void check_points() const {
    if (points_.rows() == 0) throw ArgumentError("token set needs at least one token");
    if (points_.cols() == 0) throw ArgumentError("token dimension must be at least 1");
    for (double v : points_.data()) {
      if (!std::isfinite(v)) throw ArgumentError("token coordinates must be finite");
    }
  }

  Matrix points_;
  std::vector<double> weights_;
};

inline void require_same_dim(const TokenSet& a, const TokenSet& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("token dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
  }
}

inline double squared_distance(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t d = 0; d < x.size(); ++d) {
    const double diff = x[d] - y[d];
    s += diff * diff;
  }
  return s;
}

/// Index-wise (1-t)a + tb with uniform weights; sizes and dims must agree.
inline TokenSet lerp_tokens(const TokenSet& a, const TokenSet& b, double t) {
  require_same_dim(a, b);
  if (a.size() != b.size()) throw DimensionError("lerp needs equal token counts");
  Matrix out(a.size(), a.dim());
  for (std::size_t k = 0; k < a.size(); ++k) {
    for (std::size_t d = 0; d < a.dim(); ++d) {
      out(k, d) = (1.0 - t) * a.points()(k, d) + t * b.points()(k, d);
    }
  }
  return TokenSet(std::move(out));
}

}  // namespace otmorph
