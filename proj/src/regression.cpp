#include "kinsim/regression.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "kinsim/errors.hpp"

namespace kinsim {

namespace {

constexpr int kMaxTerms = 4;

// Up to four distinct values, enough to decide the usable degree.
int distinct_up_to_four(std::span<const double> xs) {
  double seen[kMaxTerms];
  int count = 0;
  for (double x : xs) {
    bool known = false;
    for (int k = 0; k < count; ++k) known = known || seen[k] == x;
    if (!known) {
      seen[count++] = x;
      if (count == kMaxTerms) break;
    }
  }
  return count;
}

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

// Incremental QR of the design matrix by Givens rotations: R is upper
// triangular, z = Q^T y restricted to the first `terms` rows.
struct GivensLeastSquares {
  int terms;
  double r[kMaxTerms][kMaxTerms] = {};
  double z[kMaxTerms] = {};

  void add_row(double* a, double y) {
    for (int k = 0; k < terms; ++k) {
      if (a[k] == 0.0) continue;
      const double rkk = r[k][k];
      const double h = std::sqrt(rkk * rkk + a[k] * a[k]);
      const double c = rkk / h;
      const double s = a[k] / h;
      r[k][k] = h;
      for (int j = k + 1; j < terms; ++j) {
        const double rkj = r[k][j];
        r[k][j] = c * rkj + s * a[j];
        a[j] = -s * rkj + c * a[j];
      }
      const double zk = z[k];
      z[k] = c * zk + s * y;
      y = -s * zk + c * y;
    }
  }

  void solve(double* b) const {
    for (int k = terms - 1; k >= 0; --k) {
      double acc = z[k];
      for (int j = k + 1; j < terms; ++j) acc -= r[k][j] * b[j];
      if (r[k][k] == 0.0) throw DegenerateInput("cubic_fit: singular design matrix");
      b[k] = acc / r[k][k];
    }
  }
};

}  // namespace

double RegressionFit::predict(double x) const {
  return coefficients[0] + x * (coefficients[1] + x * (coefficients[2] + x * coefficients[3]));
}

double adjusted_r2(double r2, std::size_t n, int predictors) {
  const double dof = static_cast<double>(n) - predictors - 1.0;
  if (dof <= 0.0) throw DegenerateInput("adjusted R^2 needs n > predictors + 1");
  return 1.0 - (1.0 - r2) * (static_cast<double>(n) - 1.0) / dof;
}

RegressionFit cubic_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("cubic_fit: xs and ys differ in length");
  const std::size_t n = xs.size();
  if (n < 5) throw DegenerateInput("cubic_fit: need at least 5 points, got " + std::to_string(n));

  const int distinct = distinct_up_to_four(xs);
  if (distinct < 2) throw DegenerateInput("cubic_fit: all x values identical");
  const int degree = distinct - 1 < 3 ? distinct - 1 : 3;
  const int terms = degree + 1;

  bool constant_y = true;
  double y_mean = 0.0;
  double x_min = xs[0], x_max = xs[0];
  for (std::size_t i = 0; i < n; ++i) {
    constant_y = constant_y && ys[i] == ys[0];
    y_mean += ys[i];
    x_min = std::fmin(x_min, xs[i]);
    x_max = std::fmax(x_max, xs[i]);
  }
  if (constant_y) throw DegenerateInput("cubic_fit: total sum of squares is zero");
  y_mean /= static_cast<double>(n);

  // Fit in t = (x - centre) / half_width, t in [-1, 1], then map back.
  const double centre = 0.5 * (x_min + x_max);
  const double half_width = 0.5 * (x_max - x_min);
  GivensLeastSquares ls{terms};
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (xs[i] - centre) / half_width;
    double row[kMaxTerms] = {1.0, t, t * t, t * t * t};
    ls.add_row(row, ys[i]);
  }
  double b[kMaxTerms] = {};
  ls.solve(b);

  RegressionFit fit;
  fit.n = n;
  fit.effective_degree = degree;
  const double alpha = 1.0 / half_width;
  const double beta = -centre / half_width;
  for (int k = 0; k < terms; ++k) {
    for (int l = 0; l <= k; ++l) {
      fit.coefficients[static_cast<std::size_t>(l)] +=
          b[k] * binomial(k, l) * std::pow(alpha, l) * std::pow(beta, k - l);
    }
  }

  double ssr = 0.0, sst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (xs[i] - centre) / half_width;
    const double pred = b[0] + t * (b[1] + t * (b[2] + t * b[3]));
    ssr += (ys[i] - pred) * (ys[i] - pred);
    sst += (ys[i] - y_mean) * (ys[i] - y_mean);
  }
  if (sst == 0.0) throw DegenerateInput("cubic_fit: total sum of squares is zero");
  fit.r2 = 1.0 - ssr / sst;
  fit.adj_r2 = adjusted_r2(fit.r2, n, degree);
  return fit;
}

}  // namespace kinsim
