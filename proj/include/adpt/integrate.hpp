#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

namespace adpt {

using VectorField =
    std::function<void(double t, const Eigen::VectorXd& x, Eigen::VectorXd& dx)>;

// Writes the values of all quadrature integrands at (t, x) into out
// (quad_dim entries).  Used to integrate running costs and regressor
// outer products alongside the state.
using QuadratureFn =
    std::function<void(double t, const Eigen::VectorXd& x, double* out)>;

struct CheckpointRecord {
  double t = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd accum;  // integrals of the quadrature integrands from t0 to t
};

// Classical fixed-step RK4 over t_grid (strictly increasing; the step size is
// taken from consecutive grid points, so a trailing short step is allowed).
// The quadrature accumulator advances with the same stage weights as the
// state, giving O(h^4) integrals without extra field evaluations.  Snapshots
// of (t, x, accum) are taken at the requested grid indices.  Throws
// DivergenceError as soon as any state component is non-finite or exceeds
// divergence_bound in magnitude.
std::vector<CheckpointRecord> rk4_augmented(
    const VectorField& field, const QuadratureFn& quadrature, int quad_dim,
    const Eigen::VectorXd& x0, const std::vector<double>& t_grid,
    const std::vector<std::size_t>& checkpoints, double divergence_bound = 1e9);

// Convenience form: independent scalar integrands and checkpoint times
// (each must match a grid point up to roundoff).
std::vector<CheckpointRecord> rk4_augmented(
    const VectorField& field,
    const std::vector<std::function<double(double, const Eigen::VectorXd&)>>& integrands,
    const Eigen::VectorXd& x0, const std::vector<double>& t_grid,
    const std::vector<double>& checkpoint_times, double divergence_bound = 1e9);

// t0 + i*dt for i = 0..M-1 plus the exact endpoint tf.  M is chosen so the
// final step is at most dt (a short last step absorbs any remainder).
std::vector<double> uniform_grid(double t0, double tf, double dt);

// Composite trapezoid rule over (t, value) samples with strictly
// increasing times.
double trapezoid(const std::vector<std::pair<double, double>>& samples);

}  // namespace adpt
