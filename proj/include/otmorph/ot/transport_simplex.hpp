#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "otmorph/ot/cost_matrix.hpp"

namespace otmorph {

struct SimplexStats {
  std::size_t pivots = 0;
  std::size_t degenerate_pivots = 0;
};

/// Exact solver for the balanced transportation problem
///
///   min sum_ij x_ij c_ij  s.t.  sum_j x_ij = supply_i, sum_i x_ij = demand_j, x >= 0
///
/// as a primal network simplex on the bipartite graph rows -> columns. The
/// basis is a spanning tree of n + m - 1 cells, started from the north-west
/// corner rule. Pricing is Dantzig (most negative reduced cost, smallest
/// (row, col) on ties). After a run of degenerate pivots the solver switches
/// to Bland's smallest-index rule until the next non-degenerate pivot, which
/// rules out cycling.
class TransportSimplex {
 public:
  TransportSimplex(std::span<const double> supply, std::span<const double> demand,
                   const CostMatrix& cost)
      : n_(supply.size()), m_(demand.size()), cost_(cost), flow_(n_, m_, 0.0),
        basic_(n_ * m_, 0), adj_(n_ + m_), u_(n_), v_(m_) {
    if (cost.rows() != n_ || cost.cols() != m_) {
      throw DimensionError("transport: cost matrix shape does not match marginals");
    }
    if (n_ == 0 || m_ == 0) throw ArgumentError("transport: empty marginal");
    initial_basis(supply, demand);
  }

  void solve() {
    const double scale = std::max(1.0, cost_.max_entry());
    const double eps = 1e-12 * scale;
    const std::size_t max_pivots = 200 * (n_ + m_) * (n_ + m_) + 10000;
    std::size_t degenerate_run = 0;
    bool bland = false;

    for (;;) {
      compute_potentials();
      std::size_t ei = 0, ej = 0;
      if (!price(bland, eps, ei, ej)) return;
      if (stats_.pivots >= max_pivots) {
        throw SolverError("transport: pivot limit reached without optimality");
      }
      const bool degenerate = pivot(ei, ej);
      ++stats_.pivots;
      if (degenerate) {
        ++stats_.degenerate_pivots;
        if (++degenerate_run >= kDegenerateRunBeforeBland) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
    }
  }

  const Matrix& flow() const noexcept { return flow_; }
  const SimplexStats& stats() const noexcept { return stats_; }

 private:
  static constexpr std::size_t kDegenerateRunBeforeBland = 32;

  std::size_t col_node(std::size_t j) const { return n_ + j; }

  void add_edge(std::size_t i, std::size_t j) {
    basic_[i * m_ + j] = 1;
    adj_[i].push_back(col_node(j));
    adj_[col_node(j)].push_back(i);
  }

  void remove_edge(std::size_t i, std::size_t j) {
    basic_[i * m_ + j] = 0;
    auto drop = [](std::vector<std::size_t>& list, std::size_t node) {
      list.erase(std::find(list.begin(), list.end(), node));
    };
    drop(adj_[i], col_node(j));
    drop(adj_[col_node(j)], i);
  }

  void initial_basis(std::span<const double> supply, std::span<const double> demand) {
    std::vector<double> ra(supply.begin(), supply.end());
    std::vector<double> rb(demand.begin(), demand.end());
    std::size_t i = 0, j = 0;
    for (;;) {
      const double q = std::max(0.0, std::min(ra[i], rb[j]));
      flow_(i, j) = q;
      add_edge(i, j);
      ra[i] -= q;
      rb[j] -= q;
      if (i == n_ - 1 && j == m_ - 1) break;
      if (i == n_ - 1) {
        ++j;
      } else if (j == m_ - 1) {
        ++i;
      } else if (ra[i] <= rb[j]) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  // u_i + v_j = c_ij on every basic cell, anchored at u_0 = 0.
  void compute_potentials() {
    std::vector<char> seen(n_ + m_, 0);
    stack_.clear();
    stack_.push_back(0);
    seen[0] = 1;
    u_[0] = 0.0;
    while (!stack_.empty()) {
      const std::size_t node = stack_.back();
      stack_.pop_back();
      for (std::size_t next : adj_[node]) {
        if (seen[next]) continue;
        seen[next] = 1;
        if (node < n_) {
          const std::size_t j = next - n_;
          v_[j] = cost_(node, j) - u_[node];
        } else {
          const std::size_t j = node - n_;
          u_[next] = cost_(next, j) - v_[j];
        }
        stack_.push_back(next);
      }
    }
  }

  bool price(bool bland, double eps, std::size_t& ei, std::size_t& ej) const {
    double best = -eps;
    bool found = false;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < m_; ++j) {
        if (basic_[i * m_ + j]) continue;
        const double reduced = cost_(i, j) - u_[i] - v_[j];
        if (reduced < best) {
          best = reduced;
          ei = i;
          ej = j;
          found = true;
          if (bland) return true;
        }
      }
    }
    return found;
  }

  // Returns true when the pivot moved zero mass.
  bool pivot(std::size_t ei, std::size_t ej) {
    // Tree path from column ej back to row ei.
    std::vector<std::size_t> parent(n_ + m_, kNone);
    stack_.clear();
    stack_.push_back(ei);
    parent[ei] = ei;
    const std::size_t goal = col_node(ej);
    while (!stack_.empty() && parent[goal] == kNone) {
      const std::size_t node = stack_.back();
      stack_.pop_back();
      for (std::size_t next : adj_[node]) {
        if (parent[next] != kNone) continue;
        parent[next] = node;
        stack_.push_back(next);
      }
    }
    if (parent[goal] == kNone) throw SolverError("transport: basis is not a spanning tree");

    // Cells on the cycle, walking from the entering column back to the
    // entering row; signs alternate starting with a decrease.
    cycle_.clear();
    for (std::size_t node = goal; node != ei; node = parent[node]) {
      const std::size_t prev = parent[node];
      const std::size_t i = node < n_ ? node : prev;
      const std::size_t j = (node < n_ ? prev : node) - n_;
      cycle_.push_back({i, j});
    }

    double theta = 0.0;
    std::size_t leave = kNone;
    for (std::size_t k = 0; k < cycle_.size(); k += 2) {
      const auto [i, j] = cycle_[k];
      const double f = flow_(i, j);
      const bool better = leave == kNone || f < theta ||
                          (f == theta && index(i, j) < index(cycle_[leave].i, cycle_[leave].j));
      if (better) {
        theta = f;
        leave = k;
      }
    }

    for (std::size_t k = 0; k < cycle_.size(); ++k) {
      const auto [i, j] = cycle_[k];
      if (k % 2 == 0) {
        flow_(i, j) -= theta;
      } else {
        flow_(i, j) += theta;
      }
    }
    const auto [li, lj] = cycle_[leave];
    flow_(li, lj) = 0.0;
    remove_edge(li, lj);
    flow_(ei, ej) = theta;
    add_edge(ei, ej);
    return theta == 0.0;
  }

  std::size_t index(std::size_t i, std::size_t j) const { return i * m_ + j; }

  struct Cell {
    std::size_t i;
    std::size_t j;
  };
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::size_t n_, m_;
  const CostMatrix& cost_;
  Matrix flow_;
  std::vector<char> basic_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<double> u_, v_;
  std::vector<std::size_t> stack_;
  std::vector<Cell> cycle_;
  SimplexStats stats_;
};

}  // namespace otmorph
