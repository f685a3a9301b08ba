#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "adpt/errors.hpp"
#include "adpt/integrate.hpp"

using namespace adpt;

TEST_CASE("uniform_grid covers the span and lands exactly on the endpoints") {
  auto g = uniform_grid(0.0, 8.0, 1e-3);
  CHECK(g.size() == 8001);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 8.0);
  auto g2 = uniform_grid(1.0, 2.5, 0.5);
  REQUIRE(g2.size() == 4);
  CHECK(g2[1] == doctest::Approx(1.5));
  CHECK(g2.back() == 2.5);
  CHECK_THROWS_AS(uniform_grid(0.0, 1.0, 0.0), InputError);
  CHECK_THROWS_AS(uniform_grid(1.0, 0.0, 0.1), InputError);
}

TEST_CASE("exponential growth integrates to e with fourth-order accuracy") {
  VectorField field = [](double, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
    dx = x;
  };
  Eigen::VectorXd x0(1);
  x0 << 1.0;

  auto run = [&](double h) {
    auto records = rk4_augmented(field, nullptr, 0, x0, uniform_grid(0.0, 1.0, h),
                                 {uniform_grid(0.0, 1.0, h).size() - 1});
    return records[0].x[0];
  };
  const double e1 = run(0.1);
  const double e2 = run(0.05);
  CHECK(e1 == doctest::Approx(std::exp(1.0)).epsilon(1e-6));
  // halving h must shrink the error by about 2^4
  const double ratio = std::abs(e1 - std::exp(1.0)) / std::abs(e2 - std::exp(1.0));
  CHECK(ratio > 14.0);
  CHECK(ratio < 18.0);
}

TEST_CASE("quadrature accumulators integrate alongside the state") {
  // x' = -2x, accumulate the integral of x(t) = e^{-2t}: value (1 - e^{-2T})/2
  VectorField field = [](double, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
    dx = -2.0 * x;
  };
  QuadratureFn quad = [](double, const Eigen::VectorXd& x, double* out) {
    out[0] = x[0];
    out[1] = x[0] * x[0];
  };
  Eigen::VectorXd x0(1);
  x0 << 1.0;
  const auto grid = uniform_grid(0.0, 1.0, 1e-3);
  auto records = rk4_augmented(field, quad, 2, x0, grid, {grid.size() - 1});
  REQUIRE(records.size() == 1);
  CHECK(records[0].accum[0] == doctest::Approx((1.0 - std::exp(-2.0)) / 2.0).epsilon(1e-9));
  CHECK(records[0].accum[1] == doctest::Approx((1.0 - std::exp(-4.0)) / 4.0).epsilon(1e-9));
}

TEST_CASE("checkpoints capture intermediate accumulator states") {
  VectorField field = [](double, const Eigen::VectorXd&, Eigen::VectorXd& dx) {
    dx.setConstant(1.0);  // x(t) = t
  };
  QuadratureFn quad = [](double, const Eigen::VectorXd& x, double* out) { out[0] = x[0]; };
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(1);
  const auto grid = uniform_grid(0.0, 1.0, 0.25);
  auto records = rk4_augmented(field, quad, 1, x0, grid, {2, 4});
  REQUIRE(records.size() == 2);
  CHECK(records[0].t == doctest::Approx(0.5));
  CHECK(records[0].x[0] == doctest::Approx(0.5));
  CHECK(records[0].accum[0] == doctest::Approx(0.125).epsilon(1e-12));  // t^2/2 at 0.5
  CHECK(records[1].accum[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("divergence beyond the bound is reported with the blow-up time") {
  VectorField field = [](double, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
    dx = x.array().square().matrix();  // finite-time blow-up from x0 = 2 at t = 0.5
  };
  Eigen::VectorXd x0(1);
  x0 << 2.0;
  const auto grid = uniform_grid(0.0, 1.0, 1e-3);
  CHECK_THROWS_AS(
      rk4_augmented(field, nullptr, 0, x0, grid, {grid.size() - 1}, 1e6),
      DivergenceError);
  try {
    rk4_augmented(field, nullptr, 0, x0, grid, {grid.size() - 1}, 1e6);
  } catch (const DivergenceError& e) {
    CHECK(e.time() > 0.4);
    CHECK(e.time() < 0.6);
  }
}

TEST_CASE("two-point trapezoid weight is exact for linear integrands") {
  // segment [r, s] with h(t) = a t + b: integral is (s - r) (h(s) + h(r)) / 2
  const double r = 0.3, s = 1.1, a = 2.0, b = -0.7;
  const double hr = a * r + b, hs = a * s + b;
  const double exact = a * (s * s - r * r) / 2.0 + b * (s - r);
  CHECK((s - r) * (hs + hr) / 2.0 == doctest::Approx(exact).epsilon(1e-15));

  std::vector<std::pair<double, double>> samples = {{r, hr}, {s, hs}};
  CHECK(trapezoid(samples) == doctest::Approx(exact).epsilon(1e-15));
}

TEST_CASE("composite trapezoid converges quadratically on smooth integrands") {
  auto composite = [](int pieces) {
    std::vector<std::pair<double, double>> samples;
    for (int i = 0; i <= pieces; ++i) {
      const double t = static_cast<double>(i) / pieces;
      samples.emplace_back(t, std::exp(t));
    }
    return trapezoid(samples);
  };
  const double exact = std::exp(1.0) - 1.0;
  const double e1 = std::abs(composite(64) - exact);
  const double e2 = std::abs(composite(128) - exact);
  CHECK(e1 / e2 > 3.8);
  CHECK(e1 / e2 < 4.2);
}
