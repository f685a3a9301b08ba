#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "adpt/controller.hpp"
#include "adpt/expr.hpp"
#include "adpt/model_free.hpp"
#include "adpt/system.hpp"

namespace adpt {

// Hamilton product; quaternions stored as (w, x, y, z).
Eigen::Vector4d quaternion_multiply(const Eigen::Vector4d& a, const Eigen::Vector4d& b);
// A 3-vector argument is promoted to the pure quaternion (0, v).
Eigen::Vector4d quaternion_multiply(const Eigen::Vector4d& a, const Eigen::Vector3d& v);
Eigen::Vector4d quaternion_multiply(const Eigen::Vector3d& v, const Eigen::Vector4d& b);

// Rigid-body attitude regulation written in tracking-error form.  The state
// is x = (e_q, e_Omega) in R^7: the quaternion error against the identity
// attitude, embedded in all of R^4 with an attractivity term that pulls
// |e_q + q_e| back to the unit sphere, plus the body angular velocity error.
// Fully actuated: three torque inputs.
struct SatelliteFixture {
  Eigen::Vector3d inertia{0.1029, 0.1263, 0.0292};
  double alpha_embed = 1.0;   // embedding attractivity gain
  double state_weight = 2.0;  // q(x) = state_weight * |x|^2; R = identity

  // Benchmark initial error: attitude rotated by theta = 1.99999*pi about
  // the first body axis, at rest.
  Eigen::VectorXd initial_state() const;

  // Native vector field (reference implementation the symbolic form is
  // tested against).
  Eigen::VectorXd error_dynamics(const Eigen::VectorXd& x, const Eigen::Vector3d& u) const;

  ControlProblem problem() const;
};

// Two-state plant with cubic stiffness; the running example for the solver.
struct ScalarFixture {
  ControlProblem problem() const;
  std::vector<Eigen::VectorXd> default_x_init() const;  // (-3, 2) and (2.2, 3)
  VectorExpr recorded_initial_control() const;          // u0 = -x1 - x2
};

// Rolls xdot = f + g(u0 + eta_k) out from each initial state (RK4 at dt) and
// records (t, x, u0, eta) every `period` seconds.  eta holds one m-row
// bundle per initial state.
TrajectoryLog synthesize_training_log(const ControlProblem& sys, const VectorExpr& u0,
                                      const std::vector<VectorExpr>& eta,
                                      const std::vector<Eigen::VectorXd>& x_init,
                                      double t0, double tf, double dt, double period);

struct BenchmarkRow {
  std::string system;  // "satellite" or "scalar"
  std::string mode;    // "mb" or "mf"
  int degree = 0;
  bool converged = false;
  int iterations = 0;
  double cost = 0.0;     // closed-loop J from the fixture's benchmark state
  double tail = 0.0;     // cost integrand at tf (truncation gauge)
  double seconds = 0.0;  // wall time of the solve itself
};

struct BenchmarkOutcome {
  BenchmarkRow row;
  PolynomialController controller;
  AdpReport report;
};

// Solves the named fixture ("satellite" or "scalar") in the given mode
// ("mb" or "mf") at the given degree, then simulates the closed loop from
// the fixture's benchmark initial state to evaluate the cost.  Model-free
// runs first synthesize a training log (satellite: 4 trajectories over
// [0, 20] sampled every 2 ms, stride 4).  Deterministic for a fixed seed.
BenchmarkOutcome run_benchmark(const std::string& system, const std::string& mode,
                               int degree, std::uint64_t seed);

std::string format_benchmark_table(const std::vector<BenchmarkRow>& rows);

}  // namespace adpt
