#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "adpt/adp.hpp"
#include "adpt/controller.hpp"
#include "adpt/expr.hpp"
#include "adpt/rng.hpp"
#include "adpt/system.hpp"

namespace adpt {

struct Linearization {
  Eigen::MatrixXd A;  // df/dx at the origin, n x n
  Eigen::MatrixXd B;  // g(0), n x m
};

// Symbolic Jacobian of f at the origin plus g(0).  Requires f(0) = 0
// (checked to 1e-9); throws InputError otherwise or when f contains a
// non-differentiable construct.
Linearization linearize(const ControlProblem& sys);

// Quadratic part of the state cost: Q[i][j] = 0.5 * d^2 q / dx_i dx_j at 0,
// computed symbolically.  For q = x'Qx this recovers Q.
Eigen::MatrixXd quadratic_cost_matrix(const ExprPtr& q, int n);

struct CareSolution {
  Eigen::MatrixXd P;  // stabilizing solution, symmetric
  Eigen::MatrixXd K;  // R^{-1} B' P; A - B K is Hurwitz
};

// Stabilizing solution of A'P + PA - P B R^{-1} B' P + Q = 0 via the stable
// invariant subspace of the 2n x 2n Hamiltonian matrix.  Throws InputError
// when the Hamiltonian has eigenvalues within 1e-8 of the imaginary axis or
// the subspace does not yield a solution (unstabilizable pair).
CareSolution solve_care(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                        const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R);

// `count` mutually distinct exploration signals, each
// ampl * (sin(w_1 t) + ... + sin(w_num_freq t)) with the frequencies drawn
// without replacement (draw order kept) from a fixed pool of rational and
// irrational values.  Distinctness is by frequency set.  Deterministic for a
// given generator state.
std::vector<ExprPtr> default_exploration(int count, int num_freq, double ampl, Rng& rng);
std::vector<ExprPtr> default_exploration(int m, int num_freq, double ampl,
                                         std::uint64_t seed);

// The frequency pool the signals draw from.
const std::vector<double>& exploration_frequency_pool();

// u = -K x as one expression per input row.
VectorExpr feedback_expression(const Eigen::MatrixXd& K);

// Default initial policy: LQR of the symbolic linearization with
// Q_lqr = quadratic_cost_matrix(q) and the problem's R.
VectorExpr default_initial_control(const ControlProblem& sys);

struct ModelBasedOptions {
  // Initial states for exploration trajectories; empty means sample
  // x_init_num states with every component uniform on
  // (-x_init_max, -x_init_min) u (x_init_min, x_init_max).
  std::vector<Eigen::VectorXd> x_init;
  int x_init_num = 2;
  double x_init_min = 0.3;
  double x_init_max = 0.9;

  // Per-trajectory time spans; a single entry is reused for all.
  std::vector<std::pair<double, double>> t_span = {{0.0, 8.0}};
  double dt = 1e-3;       // internal RK4 step
  double segment = 0.05;  // seconds per raw segment
  int stride = 1;         // raw segments merged per equation

  // Initial policy u0(x); empty rows means the LQR default.
  VectorExpr u0;
  // Exploration signals (functions of t only): either m rows shared by all
  // trajectories or m rows per trajectory; empty means generated defaults.
  std::vector<ExprPtr> eta;
  double expl_ampl = 0.8;
  int num_freq = 4;

  std::uint64_t seed = 1;

  int crit = 1;
  double epsilon = 1e-3;
  int max_iter = 100;
};

// Fully resolved exploration setup: concrete initial states, spans, initial
// policy and per-trajectory signal bundles.
struct ExplorationPlan {
  std::vector<Eigen::VectorXd> x_init;
  std::vector<std::pair<double, double>> t_span;  // one per initial state
  VectorExpr u0;                                  // m rows, functions of x
  std::vector<VectorExpr> eta;                    // m rows per trajectory, functions of t
  double dt = 1e-3;
  double segment = 0.05;
  int stride = 1;
};

// Samples initial states and fills in default u0/eta where the options left
// them empty.  Consumes randomness from rng in a fixed order (initial states
// first, then signals), so a seeded generator makes the plan reproducible.
ExplorationPlan resolve_plan(const ControlProblem& sys, const ModelBasedOptions& opts,
                             Rng& rng);

// Integrates xdot = f + g(u0 + eta) from every initial state with the
// regression integrands accumulated alongside, slices each trajectory into
// segments of the configured length, and applies stride merging.  Throws
// DivergenceError when a trajectory blows up and InputError when no segment
// fits the time span.
std::vector<SegmentData> collect_segments(const ControlProblem& sys, int d,
                                          const ExplorationPlan& plan);

struct ModelBasedResult {
  PolynomialController controller;
  AdpReport report;
};

// The whole pipeline: resolve_plan -> collect_segments -> adp_iterate.
// The returned controller carries provenance (mode "model-based", the seed,
// iteration count, convergence flag); when the iteration hit max_iter the
// report says so and the controller is the last iterate.
ModelBasedResult solve_model_based(const ControlProblem& sys, int d,
                                   const ModelBasedOptions& opts);

}  // namespace adpt
