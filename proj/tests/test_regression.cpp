#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "kinsim/errors.hpp"
#include "kinsim/regression.hpp"
#include "oracles.hpp"

using namespace kinsim;

namespace {

// 20 points of a noisy cubic; reference values computed at 50 digits.
const std::vector<double> kFrozenX = [] {
  std::vector<double> xs;
  for (int k = 0; k < 20; ++k) xs.push_back(-2.0 + 0.25 * k);
  return xs;
}();
const std::vector<double> kFrozenY{
    3.2241470984807897, 2.9249447504692072, 2.8856986598718789, 2.554972888911063,
    2.4220167036826641, 2.1143346683334935, 1.9249877209662952, 1.6909898690709596,
    1.4867648249902227, 1.3727155788307869, 1.1995962354676935, 1.2472832686120024,
    1.1556461866643001, 1.4026363160479349, 1.4468225257371402, 1.9270538347648809,
    2.1646247347240528, 2.9092877592040485, 3.400024482664138,  4.4386622648084537};
const std::array<double, 4> kFrozenCoefficients{1.494072889492301, -0.70503725450195501,
                                                0.30525517596903381, 0.12034161689087107};
constexpr double kFrozenR2 = 0.99405892362736639;
constexpr double kFrozenAdjR2 = 0.99294497180749759;

std::vector<double> residuals(const RegressionFit& fit, const std::vector<double>& xs,
                              const std::vector<double>& ys) {
  std::vector<double> e;
  for (std::size_t k = 0; k < xs.size(); ++k) e.push_back(ys[k] - fit.predict(xs[k]));
  return e;
}

}  // namespace

TEST_CASE("exact cubic is recovered") {
  std::vector<double> xs, ys;
  for (int k = 0; k < 12; ++k) {
    const double x = 0.5 * k - 1.0;
    xs.push_back(x);
    ys.push_back(2.0 - x + 0.5 * x * x + 0.25 * x * x * x);
  }
  const RegressionFit fit = cubic_fit(xs, ys);
  CHECK(fit.effective_degree == 3);
  CHECK(fit.n == 12);
  CHECK(std::fabs(fit.r2 - 1.0) < 1e-9);
  CHECK(std::fabs(fit.adj_r2 - 1.0) < 1e-9);
  CHECK(oracle::max_relative_error(fit.coefficients, {2.0, -1.0, 0.5, 0.25}) < 1e-9);
}

TEST_CASE("frozen reference dataset") {
  const RegressionFit fit = cubic_fit(kFrozenX, kFrozenY);
  CHECK(oracle::max_relative_error(fit.coefficients, kFrozenCoefficients) < 1e-6);
  CHECK(oracle::max_relative_error(fit.coefficients,
                                   oracle::normal_equations_cubic(kFrozenX, kFrozenY)) < 1e-6);
  CHECK(fit.r2 == doctest::Approx(kFrozenR2).epsilon(1e-9));
  CHECK(fit.adj_r2 == doctest::Approx(kFrozenAdjR2).epsilon(1e-9));
  CHECK(fit.adj_r2 == doctest::Approx(1.0 - (1.0 - fit.r2) * 19.0 / 16.0).epsilon(1e-12));
}

TEST_CASE("degenerate inputs") {
  const std::vector<double> four{1, 2, 3, 4};
  CHECK_THROWS_AS(cubic_fit(four, four), DegenerateInput);
  const std::vector<double> same_x(10, 3.0), ramp{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  CHECK_THROWS_AS(cubic_fit(same_x, ramp), DegenerateInput);
  const std::vector<double> flat(10, 1.5);
  CHECK_THROWS_AS(cubic_fit(ramp, flat), DegenerateInput);
  CHECK_THROWS_AS(adjusted_r2(0.5, 4, 3), DegenerateInput);
  CHECK_THROWS_AS(cubic_fit(ramp, four), std::exception);
}

TEST_CASE("degree drops with few distinct x") {
  SUBCASE("three distinct values fit a quadratic") {
    const std::vector<double> xs{0, 0, 1, 1, 2, 2, 0, 1};
    std::vector<double> ys;
    for (double x : xs) ys.push_back(1.0 + 2.0 * x - 3.0 * x * x);
    ys[0] += 0.1;
    ys[1] -= 0.1;
    const RegressionFit fit = cubic_fit(xs, ys);
    CHECK(fit.effective_degree == 2);
    CHECK(fit.coefficients[3] == 0.0);
    CHECK(fit.coefficients[2] == doctest::Approx(-3.0));
    CHECK(fit.adj_r2 == doctest::Approx(adjusted_r2(fit.r2, xs.size(), 2)));
  }
  SUBCASE("two distinct values fit a line") {
    const std::vector<double> xs{0, 16, 0, 16, 0, 16};
    const std::vector<double> ys{1, 5, 2, 6, 3, 4};
    const RegressionFit fit = cubic_fit(xs, ys);
    CHECK(fit.effective_degree == 1);
    CHECK(fit.predict(0) == doctest::Approx(2.0));
    CHECK(fit.predict(16) == doctest::Approx(5.0));
    CHECK(fit.coefficients[2] == 0.0);
  }
}

TEST_CASE("residuals are orthogonal to the design") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ux(0.0, 180.0);
  std::normal_distribution<double> noise(0.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> xs, ys;
    for (int k = 0; k < 500; ++k) {
      const double x = ux(rng);
      xs.push_back(x);
      ys.push_back(20.0 - 0.1 * x + 1e-4 * x * x + noise(rng));
    }
    const RegressionFit fit = cubic_fit(xs, ys);
    const auto e = residuals(fit, xs, ys);
    double scale = 0.0;
    for (double y : ys) scale = std::fmax(scale, std::fabs(y));
    for (int p = 0; p < 4; ++p) {
      double dot = 0.0, norm = 0.0;
      for (std::size_t k = 0; k < xs.size(); ++k) {
        const double xp = std::pow(xs[k], p);
        dot += xp * e[k];
        norm += std::fabs(xp);
      }
      REQUIRE(std::fabs(dot) < 1e-6 * scale * norm);
    }
    REQUIRE(fit.r2 >= 0.0);
    REQUIRE(fit.r2 <= 1.0);
  }
}

TEST_CASE("affine changes of x leave R^2 unchanged") {
  std::vector<double> shifted;
  for (double x : kFrozenX) shifted.push_back(3.0 * x + 40.0);
  const RegressionFit a = cubic_fit(kFrozenX, kFrozenY);
  const RegressionFit b = cubic_fit(shifted, kFrozenY);
  CHECK(b.r2 == doctest::Approx(a.r2).epsilon(1e-9));
  for (std::size_t k = 0; k < kFrozenX.size(); ++k) {
    CHECK(b.predict(shifted[k]) == doctest::Approx(a.predict(kFrozenX[k])).epsilon(1e-8));
  }
}

TEST_CASE("random datasets agree with the normal-equation oracle") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> coef(-2.0, 2.0), ux(-3.0, 3.0);
  std::normal_distribution<double> noise(0.0, 0.5);
  for (int trial = 0; trial < 50; ++trial) {
    const double c0 = coef(rng), c1 = coef(rng), c2 = coef(rng), c3 = coef(rng);
    std::vector<double> xs, ys;
    for (int k = 0; k < 40; ++k) {
      const double x = ux(rng);
      xs.push_back(x);
      ys.push_back(c0 + c1 * x + c2 * x * x + c3 * x * x * x + noise(rng));
    }
    const RegressionFit fit = cubic_fit(xs, ys);
    REQUIRE(oracle::max_relative_error(fit.coefficients, oracle::normal_equations_cubic(xs, ys)) <
            1e-6);
  }
}
