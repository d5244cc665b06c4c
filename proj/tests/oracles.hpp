#pragma once

// Independent reference computations used only by tests.

#include <array>
#include <cmath>
#include <set>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace kinsim::oracle {

/// Common neighbours from explicit neighbour sets.
inline std::vector<std::vector<int>> common_neighbors(
    int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::set<int>> nb(static_cast<std::size_t>(n));
  for (auto [a, b] : edges) {
    nb[static_cast<std::size_t>(a)].insert(b);
    nb[static_cast<std::size_t>(b)].insert(a);
  }
  std::vector<std::vector<int>> c(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      int shared = 0;
      for (int k : nb[static_cast<std::size_t>(i)]) shared += nb[static_cast<std::size_t>(j)].count(k) ? 1 : 0;
      c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = shared;
    }
  }
  return c;
}

/// Cubic least squares by the normal equations (X^T X) b = X^T y, solved with
/// partially pivoted Gaussian elimination in long double.
inline std::array<double, 4> normal_equations_cubic(std::span<const double> xs,
                                                    std::span<const double> ys) {
  long double m[4][5] = {};
  for (std::size_t k = 0; k < xs.size(); ++k) {
    long double p[4] = {1.0L, xs[k], static_cast<long double>(xs[k]) * xs[k],
                        static_cast<long double>(xs[k]) * xs[k] * xs[k]};
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) m[r][c] += p[r] * p[c];
      m[r][4] += p[r] * ys[k];
    }
  }
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r) {
      if (std::fabs(m[r][col]) > std::fabs(m[pivot][col])) pivot = r;
    }
    if (m[pivot][col] == 0.0L) throw std::runtime_error("singular normal equations");
    for (int c = 0; c < 5; ++c) std::swap(m[col][c], m[pivot][c]);
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      const long double f = m[r][col] / m[col][col];
      for (int c = col; c < 5; ++c) m[r][c] -= f * m[col][c];
    }
  }
  std::array<double, 4> b{};
  for (int r = 0; r < 4; ++r) b[static_cast<std::size_t>(r)] = static_cast<double>(m[r][4] / m[r][r]);
  return b;
}

/// Relative agreement scaled by the largest coefficient magnitude.
inline double max_relative_error(const std::array<double, 4>& got, const std::array<double, 4>& want) {
  double scale = 0.0;
  for (double w : want) scale = std::fmax(scale, std::fabs(w));
  double err = 0.0;
  for (std::size_t k = 0; k < 4; ++k) err = std::fmax(err, std::fabs(got[k] - want[k]));
  return scale == 0.0 ? err : err / scale;
}

}  // namespace kinsim::oracle
