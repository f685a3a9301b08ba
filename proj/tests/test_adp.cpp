#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <vector>

#include "adpt/adp.hpp"
#include "adpt/basis.hpp"
#include "adpt/errors.hpp"
#include "adpt/expr.hpp"
#include "adpt/integrate.hpp"
#include "adpt/rng.hpp"

using namespace adpt;

namespace {

SegmentData scalar_segment(double xr, double xs, double int_q, double int_u0Ru0,
                           double alpha, double beta, double gamma) {
  SegmentData s;
  s.x_start = Eigen::VectorXd::Constant(1, xr);
  s.x_end = Eigen::VectorXd::Constant(1, xs);
  s.phi_jump = Eigen::VectorXd(2);
  s.phi_jump << xs - xr, xs * xs - xr * xr;
  s.int_q = int_q;
  s.int_u0Ru0 = int_u0Ru0;
  s.int_alpha = Eigen::MatrixXd::Constant(1, 1, alpha);
  s.int_beta = Eigen::MatrixXd::Constant(1, 1, beta);
  s.int_gamma = Eigen::MatrixXd::Constant(1, 1, gamma);
  return s;
}

AdpProblem scalar_problem(double r_weight = 1.0) {
  AdpProblem p;
  p.n = 1;
  p.m = 1;
  p.R = Eigen::MatrixXd::Constant(1, 1, r_weight);
  p.state_cost = [](const Eigen::VectorXd& x) { return x.squaredNorm(); };
  p.d = 1;
  return p;
}

// Rolls x' = u0(x) + eta(t) for the one-dimensional plant x' = u and returns
// checkpointed segments, everything integrated with RK4 stage weights.
std::vector<SegmentData> roll_scalar_plant(double x0, double tf, double u0_gain,
                                           const ExprPtr& eta) {
  const double dt = 1e-3;
  const int per_segment = 50;
  VectorField field = [&](double t, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
    dx.resize(1);
    dx[0] = u0_gain * x[0] + eval_expr(*eta, nullptr, 0, t);
  };
  // accum layout: q, u0 R u0, alpha, beta, gamma
  QuadratureFn quad = [&](double t, const Eigen::VectorXd& x, double* out) {
    const double e = eval_expr(*eta, nullptr, 0, t);
    const double u0 = u0_gain * x[0];
    out[0] = x[0] * x[0];
    out[1] = u0 * u0;
    out[2] = e * x[0];
    out[3] = (u0 + e) * x[0];
    out[4] = x[0] * x[0];
  };
  const auto grid = uniform_grid(0.0, tf, dt);
  std::vector<std::size_t> marks;
  for (std::size_t i = 0; i + per_segment < grid.size(); i += per_segment)
    marks.push_back(i + per_segment);
  auto records = rk4_augmented(field, quad, 5, Eigen::VectorXd::Constant(1, x0), grid,
                               marks);
  std::vector<SegmentData> segments;
  Eigen::VectorXd prev_x = Eigen::VectorXd::Constant(1, x0);
  Eigen::VectorXd prev_acc = Eigen::VectorXd::Zero(5);
  for (const auto& rec : records) {
    Eigen::VectorXd d = rec.accum - prev_acc;
    segments.push_back(scalar_segment(prev_x[0], rec.x[0], d[0], d[1], d[2], d[3], d[4]));
    prev_x = rec.x;
    prev_acc = rec.accum;
  }
  return segments;
}

}  // namespace

TEST_CASE("first-iteration row matches the hand-expanded equation") {
  auto seg = scalar_segment(1.0, 2.0, 0.5, 0.2, 0.3, 0.0, 0.0);
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  assemble({seg}, scalar_problem(), nullptr, A, b);
  REQUIRE(A.rows() == 1);
  REQUIRE(A.cols() == 3);  // c1, c2, W11
  CHECK(A(0, 0) == doctest::Approx(1.0));
  CHECK(A(0, 1) == doctest::Approx(3.0));
  CHECK(A(0, 2) == doctest::Approx(0.6));
  CHECK(b[0] == doctest::Approx(-0.7));
}

TEST_CASE("later iterations fold the previous gains into row and target") {
  auto seg = scalar_segment(1.0, 2.0, 0.5, 0.2, 0.0, 0.4, 0.9);
  PolicyCoefficients prev;
  prev.c = Eigen::RowVectorXd::Zero(2);
  prev.W = Eigen::MatrixXd::Constant(1, 1, -1.0);
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  assemble({seg}, scalar_problem(), &prev, A, b);
  REQUIRE(A.rows() == 1);
  CHECK(A(0, 0) == doctest::Approx(1.0));
  CHECK(A(0, 1) == doctest::Approx(3.0));
  CHECK(A(0, 2) == doctest::Approx(2.0 * (0.4 - (-1.0) * 0.9)));  // 2.6
  CHECK(b[0] == doctest::Approx(-0.5 - 0.9));                     // u0 term drops out
}

TEST_CASE("multi-input rows vectorize the gain block column-major") {
  // n = 1, m = 2, d = 1: unknowns are c1, c2, W11, W21
  SegmentData s;
  s.x_start = Eigen::VectorXd::Constant(1, 0.5);
  s.x_end = Eigen::VectorXd::Constant(1, 1.5);
  s.phi_jump = Eigen::VectorXd(2);
  s.phi_jump << 1.0, 2.0;
  s.int_q = 0.1;
  s.int_u0Ru0 = 0.05;
  s.int_alpha = Eigen::MatrixXd(2, 1);
  s.int_alpha << 0.3, -0.2;
  s.int_beta = Eigen::MatrixXd::Zero(2, 1);
  s.int_gamma = Eigen::MatrixXd::Zero(1, 1);
  AdpProblem p;
  p.n = 1;
  p.m = 2;
  p.R = Eigen::Matrix2d::Identity();
  p.state_cost = [](const Eigen::VectorXd& x) { return x.squaredNorm(); };
  p.d = 1;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  assemble({s}, p, nullptr, A, b);
  REQUIRE(A.cols() == 4);
  CHECK(A(0, 2) == doctest::Approx(0.6));
  CHECK(A(0, 3) == doctest::Approx(-0.4));
}

TEST_CASE("least squares returns the minimum-norm solution with the true rank") {
  Rng rng(17);
  auto random_matrix = [&](int r, int c) {
    return Eigen::MatrixXd::NullaryExpr(
        r, c, [&](Eigen::Index, Eigen::Index) { return rng.uniform(-1.0, 1.0); });
  };
  for (int trial = 0; trial < 20; ++trial) {
    const int rows = 5 + rng.uniform_int(46);
    const int cols = 3 + rng.uniform_int(28);
    const int rank = 1 + rng.uniform_int(std::min(rows, cols));
    Eigen::MatrixXd A = random_matrix(rows, rank) * random_matrix(rank, cols);
    Eigen::VectorXd b = random_matrix(rows, 1);
    auto ls = solve_least_squares(A, b);
    CHECK(ls.rank == rank);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    cod.setThreshold(std::max(rows, cols) * 1e-13);
    Eigen::VectorXd ref = cod.solve(b);
    CHECK((ls.solution - ref).norm() < 1e-8 * std::max(1.0, ref.norm()));
    CHECK(ls.residual == doctest::Approx((A * ls.solution - b).norm()).epsilon(1e-10));
  }
}

TEST_CASE("least squares reproduces exact solutions of square systems") {
  Eigen::MatrixXd A(2, 2);
  A << 2, 0, 0, 4;
  Eigen::VectorXd b(2);
  b << 2, 8;
  auto ls = solve_least_squares(A, b);
  CHECK(ls.rank == 2);
  CHECK(ls.solution[0] == doctest::Approx(1.0));
  CHECK(ls.solution[1] == doctest::Approx(2.0));
  CHECK(ls.residual < 1e-14);
}

TEST_CASE("stop criteria measure absolute and relative steps as documented") {
  PolicyCoefficients prev, cur;
  prev.c = Eigen::RowVectorXd::Zero(2);
  prev.c << 3.0, 4.0;  // |c| = 5
  prev.W = Eigen::MatrixXd::Constant(1, 1, 2.0);
  cur = prev;
  cur.c[0] += 3e-3;
  cur.W(0, 0) += 4e-3;
  double delta = 0.0;

  CHECK_FALSE(stop_satisfied(0, 1e-3, prev, cur, &delta));
  CHECK(delta == doctest::Approx(5e-3));
  CHECK(stop_satisfied(0, 4e-3, prev, cur, &delta));  // dc = 3e-3 only

  CHECK_FALSE(stop_satisfied(1, 4.9e-3, prev, cur, &delta));
  CHECK(stop_satisfied(1, 5.1e-3, prev, cur, &delta));  // combined = 5e-3

  CHECK(stop_satisfied(2, 1e-3, prev, cur, &delta));  // dc <= 1e-3 * 5
  CHECK_FALSE(stop_satisfied(2, 5e-4, prev, cur, &delta));

  // criterion 3 scales by sqrt(|c|^2 + |W|^2) = sqrt(29)
  CHECK(stop_satisfied(3, 5e-3 / std::sqrt(29.0) * 1.01, prev, cur, &delta));
  CHECK_FALSE(stop_satisfied(3, 5e-3 / std::sqrt(29.0) * 0.99, prev, cur, &delta));
}

TEST_CASE("merging segments sums integrals and recomputes the jump") {
  auto s1 = scalar_segment(1.0, 2.0, 0.5, 0.2, 0.3, 0.4, 0.9);
  auto s2 = scalar_segment(2.0, 3.0, 0.25, 0.1, -0.1, 0.2, 0.7);
  BasisSpec value_basis(1, 2);

  auto merged = merge_stride({s1, s2}, 2, value_basis);
  REQUIRE(merged.size() == 1);
  CHECK(merged[0].x_start[0] == 1.0);
  CHECK(merged[0].x_end[0] == 3.0);
  // merged integrals are the ordered sums of the parts, bit for bit
  CHECK(merged[0].int_q == s1.int_q + s2.int_q);
  CHECK(merged[0].int_u0Ru0 == s1.int_u0Ru0 + s2.int_u0Ru0);
  CHECK(merged[0].int_alpha(0, 0) == s1.int_alpha(0, 0) + s2.int_alpha(0, 0));
  CHECK(merged[0].int_beta(0, 0) == s1.int_beta(0, 0) + s2.int_beta(0, 0));
  CHECK(merged[0].int_gamma(0, 0) == s1.int_gamma(0, 0) + s2.int_gamma(0, 0));
  CHECK(merged[0].phi_jump[0] == doctest::Approx(2.0));  // 3 - 1
  CHECK(merged[0].phi_jump[1] == doctest::Approx(8.0));  // 9 - 1

  // stride 1 is the identity; a short tail is dropped
  CHECK(merge_stride({s1, s2}, 1, value_basis).size() == 2);
  auto dropped = merge_stride({s1, s2, scalar_segment(3, 4, 0, 0, 0, 0, 0)}, 2,
                              value_basis);
  CHECK(dropped.size() == 1);
  CHECK_THROWS_AS(merge_stride({s1}, 0, value_basis), InputError);
}

TEST_CASE("policy iteration recovers the optimal policy for x' = u") {
  // q = x^2, R = 1: the optimal value is x^2 and the optimal policy -x.
  ExprPtr eta = parse_expression(
      "0.8*(sin(7*t) + sin(1.1*t) + sin(sqrt(3)*t) + sin(sqrt(6)*t))");
  auto segments = roll_scalar_plant(1.0, 10.0, -0.5, eta);
  auto more = roll_scalar_plant(-2.0, 10.0, -0.5, eta);
  segments.insert(segments.end(), more.begin(), more.end());

  auto result = adp_iterate(segments, scalar_problem(), "dense scalar data");
  CHECK(result.report.converged);
  CHECK(result.coefficients.W(0, 0) == doctest::Approx(-1.0).epsilon(0.01));
  CHECK(result.coefficients.c[1] == doctest::Approx(1.0).epsilon(0.01));
  CHECK(std::abs(result.coefficients.c[0]) < 0.01);
  CHECK(result.report.data_tag == "dense scalar data");
  REQUIRE(!result.report.ranks.empty());
  CHECK(result.report.ranks.front() == 3);

  // once converged, the gain is the policy-improvement of the value estimate:
  // u = -0.5 R^{-1} g' dV/dx with g = 1, so W = -c2 (the x^2 coefficient)
  CHECK(result.coefficients.W(0, 0) ==
        doctest::Approx(-result.coefficients.c[1]).epsilon(0.01));

  // and successive value estimates do not increase on the explored range
  const auto& hist = result.report.history;
  REQUIRE(hist.size() >= 2);
  for (std::size_t i = 2; i < hist.size(); ++i) {
    for (double x = -1.0; x <= 1.0 + 1e-12; x += 0.1) {
      const double vi = hist[i - 1].c[0] * x + hist[i - 1].c[1] * x * x;
      const double vn = hist[i].c[0] * x + hist[i].c[1] * x * x;
      CHECK(vn <= vi + 1e-3 * (1.0 + std::abs(vi)));
    }
  }
}

TEST_CASE("zero exploration makes the first regression rank-deficient") {
  auto segments = roll_scalar_plant(1.0, 10.0, -0.5, ex::num(0.0));
  CHECK_THROWS_AS(adp_iterate(segments, scalar_problem(), ""), ExcitationError);
  try {
    adp_iterate(segments, scalar_problem(), "");
  } catch (const ExcitationError& e) {
    CHECK(std::string(e.what()).find("rank") != std::string::npos);
  }
}

TEST_CASE("segment dimension mismatches are rejected up front") {
  auto good = scalar_segment(1.0, 2.0, 0.5, 0.2, 0.3, 0.4, 0.9);
  auto bad = good;
  bad.int_alpha = Eigen::MatrixXd::Zero(2, 1);  // wrong input count
  CHECK_THROWS_AS(adp_iterate({good, bad}, scalar_problem(), ""), InputError);
  CHECK_THROWS_AS(adp_iterate({}, scalar_problem(), ""), InputError);

  auto p = scalar_problem();
  p.R = Eigen::MatrixXd::Constant(1, 1, -1.0);  // not positive definite
  CHECK_THROWS_AS(p.validate(), InputError);
}
