#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "adpt/basis.hpp"
#include "adpt/system.hpp"

namespace adpt {

struct ControllerProvenance {
  std::string mode;  // "model-based", "model-free", or "file"
  int iterations = 0;
  bool converged = false;
  std::uint64_t seed = 0;
};

// Polynomial state feedback u(x) = W Phi_d(x) with the companion value
// estimate V(x) = c Phi_{d+1}(x).  Both bases vanish at the origin, so
// u(0) = 0 and V(0) = 0 by construction.
class PolynomialController {
 public:
  PolynomialController(int n, int m, int d, Eigen::MatrixXd W, Eigen::RowVectorXd c,
                       ControllerProvenance provenance = {});

  int state_dim() const { return n_; }
  int input_dim() const { return m_; }
  int degree() const { return d_; }
  const Eigen::MatrixXd& gains() const { return W_; }
  const Eigen::RowVectorXd& value_coefficients() const { return c_; }
  const ControllerProvenance& provenance() const { return prov_; }
  const BasisSpec& basis() const { return basis_; }  // Phi_{d+1}; Phi_d is its prefix

  Eigen::VectorXd eval_control(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  double eval_value(const Eigen::Ref<const Eigen::VectorXd>& x) const;

 private:
  int n_, m_, d_;
  BasisSpec basis_;
  int n2_;  // length of the Phi_d prefix
  Eigen::MatrixXd W_;
  Eigen::RowVectorXd c_;
  ControllerProvenance prov_;
};

// Plain-text serialization: `ADPT-CONTROLLER v1` header, n/m/d and
// provenance lines, then the W block (m rows of N2 values) and the c block
// (one row of N1 values), all printed with round-trip-exact precision so
// save -> load -> save is byte-identical.
void save_controller(const PolynomialController& ctrl, const std::string& path);
PolynomialController load_controller(const std::string& path);

struct Simulation {
  std::vector<double> t;
  std::vector<Eigen::VectorXd> x;
  std::vector<Eigen::VectorXd> u;
  std::vector<double> cost;      // running integral of q + u'Ru up to t
  double total_cost = 0.0;       // J over [0, tf]
  double tail_integrand = 0.0;   // q(x(tf)) + u(tf)' R u(tf), truncation gauge
};

// Closed-loop RK4 rollout of xdot = f(x) + g(x) u(x) from x0 over [0, tf]
// with the running cost accumulated alongside.  Samples every grid point.
// Throws DivergenceError (with the blow-up time) for destabilizing
// controllers.
Simulation simulate_closed_loop(const ControlProblem& sys,
                                const PolynomialController& ctrl,
                                const Eigen::VectorXd& x0, double tf, double dt);

// CSV with header t,x1..xn,u1..um,cost_so_far.
void save_trajectory_csv(const Simulation& sim, const std::string& path);

}  // namespace adpt
