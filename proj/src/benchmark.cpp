#include "adpt/benchmark.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <utility>

#include "adpt/errors.hpp"
#include "adpt/integrate.hpp"
#include "adpt/model_based.hpp"
#include "adpt/parallel.hpp"
#include "adpt/rng.hpp"

namespace adpt {

namespace {
constexpr double kPi = 3.14159265358979324;
}

Eigen::Vector4d quaternion_multiply(const Eigen::Vector4d& a, const Eigen::Vector4d& b) {
  const double w1 = a[0], w2 = b[0];
  const Eigen::Vector3d v1 = a.tail<3>();
  const Eigen::Vector3d v2 = b.tail<3>();
  Eigen::Vector4d out;
  out[0] = w1 * w2 - v1.dot(v2);
  out.tail<3>() = w1 * v2 + w2 * v1 + v1.cross(v2);
  return out;
}

Eigen::Vector4d quaternion_multiply(const Eigen::Vector4d& a, const Eigen::Vector3d& v) {
  return quaternion_multiply(a, Eigen::Vector4d(0.0, v[0], v[1], v[2]));
}

Eigen::Vector4d quaternion_multiply(const Eigen::Vector3d& v, const Eigen::Vector4d& b) {
  return quaternion_multiply(Eigen::Vector4d(0.0, v[0], v[1], v[2]), b);
}

Eigen::VectorXd SatelliteFixture::initial_state() const {
  const double theta = 1.99999 * kPi;
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(7);
  x0[0] = std::cos(theta / 2.0) - 1.0;
  x0[1] = std::sin(theta / 2.0);
  return x0;
}

Eigen::VectorXd SatelliteFixture::error_dynamics(const Eigen::VectorXd& x,
                                                 const Eigen::Vector3d& u) const {
  if (x.size() != 7) throw InputError("satellite state must have 7 entries");
  const Eigen::Vector4d q = x.head<4>() + Eigen::Vector4d(1.0, 0.0, 0.0, 0.0);
  const Eigen::Vector3d w = x.tail<3>();
  const Eigen::Vector4d qdot =
      0.5 * quaternion_multiply(q, w) - alpha_embed * (q.squaredNorm() - 1.0) * q;
  const Eigen::Vector3d torque = inertia.cwiseProduct(w).cross(w) + u;
  Eigen::VectorXd dx(7);
  dx.head<4>() = qdot;
  dx.tail<3>() = torque.cwiseQuotient(inertia);
  return dx;
}

ControlProblem SatelliteFixture::problem() const {
  using ex::add;
  using ex::mul;
  using ex::num;
  using ex::pow;
  using ex::state;
  using ex::sub;

  const ExprPtr x1 = state(0), x2 = state(1), x3 = state(2), x4 = state(3);
  const ExprPtr x5 = state(4), x6 = state(5), x7 = state(6);
  const ExprPtr qw = add(x1, num(1.0));  // scalar part of e_q + q_e

  // |e_q + q_e|^2 - 1, the embedding defect.
  const ExprPtr defect = sub(add(add(pow(qw, num(2.0)), pow(x2, num(2.0))),
                                 add(pow(x3, num(2.0)), pow(x4, num(2.0)))),
                             num(1.0));
  const ExprPtr half = num(0.5);
  const double I1 = inertia[0], I2 = inertia[1], I3 = inertia[2];

  ControlProblem sys;
  sys.n = 7;
  sys.m = 3;
  // d/dt (e_q) = 0.5 (e_q + q_e) (x5, x6, x7) - alpha * defect * (e_q + q_e),
  // the product taken in the quaternion sense with a pure right factor.
  sys.f.rows = {
      sub(mul(num(-0.5), add(add(mul(x2, x5), mul(x3, x6)), mul(x4, x7))),
          mul(num(alpha_embed), mul(defect, qw))),
      sub(mul(half, add(mul(qw, x5), sub(mul(x3, x7), mul(x4, x6)))),
          mul(num(alpha_embed), mul(defect, x2))),
      sub(mul(half, add(mul(qw, x6), sub(mul(x4, x5), mul(x2, x7)))),
          mul(num(alpha_embed), mul(defect, x3))),
      sub(mul(half, add(mul(qw, x7), sub(mul(x2, x6), mul(x3, x5)))),
          mul(num(alpha_embed), mul(defect, x4))),
      mul(num((I2 - I3) / I1), mul(x6, x7)),
      mul(num((I3 - I1) / I2), mul(x5, x7)),
      mul(num((I1 - I2) / I3), mul(x5, x6)),
  };

  sys.g.rows = 7;
  sys.g.cols = 3;
  sys.g.entries.assign(21, num(0.0));
  sys.g.entries[4 * 3 + 0] = num(1.0 / I1);
  sys.g.entries[5 * 3 + 1] = num(1.0 / I2);
  sys.g.entries[6 * 3 + 2] = num(1.0 / I3);

  ExprPtr cost = pow(x1, num(2.0));
  for (int i = 1; i < 7; ++i) cost = add(cost, pow(state(i), num(2.0)));
  sys.q = mul(num(state_weight), cost);
  sys.R = Eigen::MatrixXd::Identity(3, 3);
  sys.validate();
  return sys;
}

ControlProblem ScalarFixture::problem() const {
  ControlProblem sys;
  sys.n = 2;
  sys.m = 1;
  sys.f = parse_vector_expression("x2; (-3*x1 - 2*x1^3 - 2*x2)/5");
  sys.g = parse_matrix_expression("0; 0.2");
  sys.q = parse_expression("5*x1^2 + 3*x2^2");
  sys.R = Eigen::MatrixXd::Constant(1, 1, 2.0);
  sys.validate();
  return sys;
}

std::vector<Eigen::VectorXd> ScalarFixture::default_x_init() const {
  Eigen::VectorXd a(2), b(2);
  a << -3.0, 2.0;
  b << 2.2, 3.0;
  return {a, b};
}

VectorExpr ScalarFixture::recorded_initial_control() const {
  return parse_vector_expression("-x1 - x2");
}

TrajectoryLog synthesize_training_log(const ControlProblem& sys, const VectorExpr& u0,
                                      const std::vector<VectorExpr>& eta,
                                      const std::vector<Eigen::VectorXd>& x_init,
                                      double t0, double tf, double dt, double period) {
  if (x_init.empty()) throw InputError("training log needs at least one initial state");
  if (eta.size() != x_init.size())
    throw InputError("training log needs one exploration bundle per initial state");
  if (u0.size() != sys.m) throw InputError("u0 must have m rows");
  if (!(dt > 0.0) || !(period > 0.0) || !(tf > t0))
    throw InputError("training log needs dt > 0, period > 0, tf > t0");
  const std::size_t rec_every = static_cast<std::size_t>(std::llround(period / dt));
  if (rec_every < 1) throw InputError("recording period must be at least dt");

  TrajectoryLog log;
  log.n = sys.n;
  log.m = sys.m;
  log.trajectories.resize(x_init.size());

  parallel_for(x_init.size(), [&](std::size_t k) {
    const std::vector<double> grid = uniform_grid(t0, tf, dt);
    const std::size_t steps = grid.size() - 1;
    std::vector<std::size_t> checkpoints;
    for (std::size_t j = 0; j * rec_every <= steps; ++j) checkpoints.push_back(j * rec_every);
    if (checkpoints.size() < 2)
      throw InputError("time span too short to record two samples");

    const VectorExpr& eta_k = eta[k];
    VectorField field = [&](double t, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
      const Eigen::VectorXd u = u0.eval(x, t) + eta_k.eval(x, t);
      dx = sys.eval_f(x) + sys.eval_g(x) * u;
    };
    QuadratureFn nothing = [](double, const Eigen::VectorXd&, double*) {};
    const auto records = rk4_augmented(field, nothing, 0, x_init[k], grid, checkpoints);

    std::vector<TrajectorySample>& traj = log.trajectories[k];
    traj.reserve(records.size());
    for (const auto& rec : records) {
      TrajectorySample s;
      s.t = rec.t;
      s.x = rec.x;
      s.u0 = u0.eval(rec.x, rec.t);
      s.eta = eta_k.eval(rec.x, rec.t);
      traj.push_back(std::move(s));
    }
  });
  return log;
}

namespace {

// Attitude errors for exploration: rotation angles evenly spaced over
// [theta_lo, theta_hi] (largest first, so the near-antipode region the
// benchmark starts from is always covered), rotation axes drawn uniformly on
// the sphere, body at rest.  The quaternions are scaled off the unit sphere
// through a fixed radius cycle: torques never move |q| and on-sphere starts
// stay on-sphere forever, so the initial relaxation back to |q| = 1 is the
// only data that excites the radial direction — without it the regression
// loses every polynomial that vanishes on the |q| = 1 manifold.
std::vector<Eigen::VectorXd> sample_attitude_states(int count, double theta_lo,
                                                    double theta_hi, double spin,
                                                    Rng& rng) {
  static const double radius_cycle[5] = {1.4, 0.6, 1.2, 0.8, 1.0};
  static const double spin_cycle[3] = {0.0, 0.5, 1.0};
  std::vector<Eigen::VectorXd> states;
  for (int k = 0; k < count; ++k) {
    const double span = (count > 1) ? static_cast<double>(k) / (count - 1) : 0.0;
    const double theta = theta_hi - span * (theta_hi - theta_lo);
    const double z = rng.uniform(-1.0, 1.0);
    const double azimuth = rng.uniform(0.0, 2.0 * kPi);
    const double radius = radius_cycle[k % 5];
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    Eigen::Vector3d axis(r * std::cos(azimuth), r * std::sin(azimuth), z);
    const double wz = rng.uniform(-1.0, 1.0);
    const double wazimuth = rng.uniform(0.0, 2.0 * kPi);
    const double wr = std::sqrt(std::max(0.0, 1.0 - wz * wz));
    Eigen::Vector3d waxis(wr * std::cos(wazimuth), wr * std::sin(wazimuth), wz);
    Eigen::VectorXd x(7);
    x[0] = radius * std::cos(theta / 2.0) - 1.0;
    x.segment<3>(1) = radius * std::sin(theta / 2.0) * axis;
    x.segment<3>(4) = spin * spin_cycle[k % 3] * waxis;
    states.push_back(std::move(x));
  }
  return states;
}

std::vector<VectorExpr> bundle_signals(const std::vector<ExprPtr>& signals, int m) {
  std::vector<VectorExpr> bundles;
  for (std::size_t k = 0; k * static_cast<std::size_t>(m) < signals.size(); ++k) {
    VectorExpr b;
    b.rows.assign(signals.begin() + static_cast<std::ptrdiff_t>(k * static_cast<std::size_t>(m)),
                  signals.begin() + static_cast<std::ptrdiff_t>((k + 1) * static_cast<std::size_t>(m)));
    bundles.push_back(std::move(b));
  }
  return bundles;
}

}  // namespace

BenchmarkOutcome run_benchmark(const std::string& system, const std::string& mode,
                               int degree, std::uint64_t seed) {
  if (mode != "mb" && mode != "mf")
    throw InputError("benchmark mode must be 'mb' or 'mf', got '" + mode + "'");
  if (degree < 1) throw InputError("benchmark degree must be at least 1");

  ControlProblem sys;
  Eigen::VectorXd x0;
  double sim_tf = 0.0;
  std::vector<Eigen::VectorXd> mb_x_init;
  std::pair<double, double> mb_span{0.0, 0.0};
  std::vector<Eigen::VectorXd> mf_x_init;
  std::pair<double, double> mf_span{0.0, 0.0};
  int mf_stride = 1;
  int num_freq = 4;
  VectorExpr mf_u0;

  Rng rng(seed);
  if (system == "satellite") {
    SatelliteFixture fixture;
    sys = fixture.problem();
    x0 = fixture.initial_state();
    sim_tf = 50.0;
    mb_span = {0.0, 15.0};
    mb_x_init = sample_attitude_states(6, 0.6 * kPi, 1.99999 * kPi, 4.0, rng);
    mf_span = {0.0, 20.0};
    mf_x_init = sample_attitude_states(4, 0.6 * kPi, 1.99999 * kPi, 8.0, rng);
    mf_stride = 4;
    mf_u0 = default_initial_control(sys);
  } else if (system == "scalar") {
    ScalarFixture fixture;
    sys = fixture.problem();
    x0 = fixture.default_x_init().front();
    sim_tf = 20.0;
    mb_span = {0.0, 6.0};
    mb_x_init = fixture.default_x_init();
    mf_span = {0.0, 6.0};
    mf_x_init = fixture.default_x_init();
    mf_stride = 1;
    mf_u0 = fixture.recorded_initial_control();
  } else {
    throw InputError("unknown benchmark system '" + system + "' (try satellite or scalar)");
  }

  BenchmarkRow row;
  row.system = system;
  row.mode = mode;
  row.degree = degree;

  const auto t_start = std::chrono::steady_clock::now();
  auto elapsed = [&t_start]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  };

  if (mode == "mb") {
    ModelBasedOptions opts;
    opts.x_init = mb_x_init;
    opts.t_span = {mb_span};
    opts.num_freq = num_freq;
    opts.seed = seed;
    ModelBasedResult solved = solve_model_based(sys, degree, opts);
    row.seconds = elapsed();
    row.converged = solved.report.converged;
    row.iterations = solved.report.iterations;
    Simulation sim = simulate_closed_loop(sys, solved.controller, x0, sim_tf, 1e-3);
    row.cost = sim.total_cost;
    row.tail = sim.tail_integrand;
    return BenchmarkOutcome{std::move(row), std::move(solved.controller),
                            std::move(solved.report)};
  }

  const std::vector<ExprPtr> signals = default_exploration(
      sys.m * static_cast<int>(mf_x_init.size()), num_freq, 0.8, rng);
  const std::vector<VectorExpr> eta = bundle_signals(signals, sys.m);
  const TrajectoryLog log = synthesize_training_log(sys, mf_u0, eta, mf_x_init,
                                                    mf_span.first, mf_span.second, 1e-3,
                                                    2e-3);
  const auto t_solve = std::chrono::steady_clock::now();
  ModelFreeOptions opts;
  opts.stride = mf_stride;
  ModelFreeResult solved = solve_model_free(log, sys.q, sys.R, degree, opts);
  row.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_solve).count();
  row.converged = solved.report.converged;
  row.iterations = solved.report.iterations;
  Simulation sim = simulate_closed_loop(sys, solved.controller, x0, sim_tf, 1e-3);
  row.cost = sim.total_cost;
  row.tail = sim.tail_integrand;
  return BenchmarkOutcome{std::move(row), std::move(solved.controller),
                          std::move(solved.report)};
}

std::string format_benchmark_table(const std::vector<BenchmarkRow>& rows) {
  char line[160];
  std::string out;
  std::snprintf(line, sizeof(line), "%-10s %-4s %-2s %-12s %-10s %-6s %-9s %s\n",
                "system", "mode", "d", "J(x0)", "tail", "iters", "converged", "seconds");
  out += line;
  for (const BenchmarkRow& r : rows) {
    std::snprintf(line, sizeof(line), "%-10s %-4s %-2d %-12.6g %-10.3g %-6d %-9s %.2f\n",
                  r.system.c_str(), r.mode.c_str(), r.degree, r.cost, r.tail, r.iterations,
                  r.converged ? "yes" : "no", r.seconds);
    out += line;
  }
  return out;
}

}  // namespace adpt
