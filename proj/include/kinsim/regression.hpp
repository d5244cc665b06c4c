#pragma once

#include <array>
#include <cstddef>
#include <span>

namespace kinsim {

/// Least-squares cubic y = c0 + c1 x + c2 x^2 + c3 x^3.
struct RegressionFit {
  std::array<double, 4> coefficients{};  // unused high-order terms are zero
  std::size_t n = 0;
  double r2 = 0.0;
  double adj_r2 = 0.0;
  int effective_degree = 3;

  double predict(double x) const;
};

/// Ordinary least squares on {1, x, x^2, x^3} via Givens QR. With fewer
/// than four distinct x values the degree drops to (distinct - 1).
/// Throws DegenerateInput for n < 5, constant x, or constant y.
RegressionFit cubic_fit(std::span<const double> xs, std::span<const double> ys);

/// Penalised R^2 for `predictors` regressors plus an intercept.
double adjusted_r2(double r2, std::size_t n, int predictors);

}  // namespace kinsim
