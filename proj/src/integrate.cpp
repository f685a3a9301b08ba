#include "adpt/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adpt/errors.hpp"
#include "adpt/kernels.hpp"

namespace adpt {
namespace {

void check_state(const Eigen::VectorXd& x, double bound, double t) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = x[i];
    if (!std::isfinite(v) || std::fabs(v) > bound)
      throw DivergenceError(
          "trajectory diverged at t = " + std::to_string(t) + " (|x" +
              std::to_string(i + 1) + "| > " + std::to_string(bound) + ")",
          t);
  }
}

}  // namespace

std::vector<CheckpointRecord> rk4_augmented(
    const VectorField& field, const QuadratureFn& quadrature, int quad_dim,
    const Eigen::VectorXd& x0, const std::vector<double>& t_grid,
    const std::vector<std::size_t>& checkpoints, double divergence_bound) {
  if (t_grid.size() < 2) throw InputError("rk4_augmented: need at least two grid points");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw InputError("rk4_augmented: time grid must be strictly increasing");
  if (quad_dim < 0) throw InputError("rk4_augmented: negative quadrature dimension");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] >= t_grid.size())
      throw InputError("rk4_augmented: checkpoint index out of range");
    if (i > 0 && checkpoints[i] <= checkpoints[i - 1])
      throw InputError("rk4_augmented: checkpoint indices must be strictly increasing");
  }

  const Eigen::Index n = x0.size();
  Eigen::VectorXd x = x0;
  Eigen::VectorXd accum = Eigen::VectorXd::Zero(quad_dim);
  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), xs(n);
  Eigen::VectorXd q1(quad_dim), q2(quad_dim), q3(quad_dim), q4(quad_dim);

  check_state(x, divergence_bound, t_grid.front());

  std::vector<CheckpointRecord> records;
  records.reserve(checkpoints.size());
  std::size_t next_cp = 0;
  const auto maybe_emit = [&](std::size_t grid_index, double t) {
    if (next_cp < checkpoints.size() && checkpoints[next_cp] == grid_index) {
      records.push_back({t, x, accum});
      ++next_cp;
    }
  };
  maybe_emit(0, t_grid.front());

  const std::size_t steps = t_grid.size() - 1;
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = t_grid[s];
    const double h = t_grid[s + 1] - t;

    field(t, x, k1);
    if (quad_dim) quadrature(t, x, q1.data());
    xs = x + (0.5 * h) * k1;
    field(t + 0.5 * h, xs, k2);
    if (quad_dim) quadrature(t + 0.5 * h, xs, q2.data());
    xs = x + (0.5 * h) * k2;
    field(t + 0.5 * h, xs, k3);
    if (quad_dim) quadrature(t + 0.5 * h, xs, q3.data());
    xs = x + h * k3;
    field(t + h, xs, k4);
    if (quad_dim) quadrature(t + h, xs, q4.data());

    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (quad_dim) {
      const std::size_t nq = static_cast<std::size_t>(quad_dim);
      kernels::axpy(h / 6.0, q1.data(), accum.data(), nq);
      kernels::axpy(h / 3.0, q2.data(), accum.data(), nq);
      kernels::axpy(h / 3.0, q3.data(), accum.data(), nq);
      kernels::axpy(h / 6.0, q4.data(), accum.data(), nq);
    }

    check_state(x, divergence_bound, t_grid[s + 1]);
    maybe_emit(s + 1, t_grid[s + 1]);
  }
  return records;
}

std::vector<CheckpointRecord> rk4_augmented(
    const VectorField& field,
    const std::vector<std::function<double(double, const Eigen::VectorXd&)>>& integrands,
    const Eigen::VectorXd& x0, const std::vector<double>& t_grid,
    const std::vector<double>& checkpoint_times, double divergence_bound) {
  std::vector<std::size_t> indices;
  indices.reserve(checkpoint_times.size());
  for (double ct : checkpoint_times) {
    const auto it = std::lower_bound(t_grid.begin(), t_grid.end(),
                                     ct - 1e-9 * std::max(1.0, std::fabs(ct)));
    if (it == t_grid.end() ||
        std::fabs(*it - ct) > 1e-9 * std::max(1.0, std::fabs(ct)))
      throw InputError("rk4_augmented: checkpoint time " + std::to_string(ct) +
                       " does not lie on the time grid");
    indices.push_back(static_cast<std::size_t>(it - t_grid.begin()));
  }
  const QuadratureFn quad = [&integrands](double t, const Eigen::VectorXd& x,
                                          double* out) {
    for (std::size_t i = 0; i < integrands.size(); ++i) out[i] = integrands[i](t, x);
  };
  return rk4_augmented(field, quad, static_cast<int>(integrands.size()), x0,
                       t_grid, indices, divergence_bound);
}

std::vector<double> uniform_grid(double t0, double tf, double dt) {
  if (!(dt > 0.0)) throw InputError("uniform_grid: dt must be positive");
  if (!(tf > t0)) throw InputError("uniform_grid: tf must exceed t0");
  const double span = tf - t0;
  // Steps of size dt; any sub-dt remainder becomes a short final step.
  std::size_t full = static_cast<std::size_t>(std::floor(span / dt + 1e-9));
  if (full > 0 && t0 + static_cast<double>(full) * dt >= tf) --full;
  std::vector<double> grid;
  grid.reserve(full + 2);
  for (std::size_t i = 0; i <= full; ++i) grid.push_back(t0 + static_cast<double>(i) * dt);
  grid.push_back(tf);
  return grid;
}

double trapezoid(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 2)
    throw InputError("trapezoid: need at least two samples");
  double total = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double dt = samples[i].first - samples[i - 1].first;
    if (!(dt > 0.0))
      throw InputError("trapezoid: sample times must be strictly increasing");
    total += 0.5 * dt * (samples[i - 1].second + samples[i].second);
  }
  return total;
}

}  // namespace adpt
