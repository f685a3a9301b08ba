#include "adpt/model_based.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <utility>

#include "adpt/basis.hpp"
#include "adpt/errors.hpp"
#include "adpt/integrate.hpp"
#include "adpt/kernels.hpp"
#include "adpt/parallel.hpp"

namespace adpt {

Linearization linearize(const ControlProblem& sys) {
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(sys.n);
  const Eigen::VectorXd f0 = sys.eval_f(origin);
  if (f0.cwiseAbs().maxCoeff() > 1e-9)
    throw InputError("f(0) must vanish for regulator problems; got |f(0)| = " +
                     std::to_string(f0.cwiseAbs().maxCoeff()));
  Linearization lin;
  lin.A.resize(sys.n, sys.n);
  for (int i = 0; i < sys.n; ++i) {
    for (int j = 0; j < sys.n; ++j) {
      lin.A(i, j) = eval_expr(differentiate(sys.f.rows[static_cast<std::size_t>(i)], j),
                              origin, 0.0);
    }
  }
  lin.B = sys.eval_g(origin);
  return lin;
}

Eigen::MatrixXd quadratic_cost_matrix(const ExprPtr& q, int n) {
  if (!q) throw InputError("state cost expression is missing");
  check_dimension(*q, n, "state cost");
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd H(n, n);
  for (int i = 0; i < n; ++i) {
    const ExprPtr di = differentiate(q, i);
    for (int j = 0; j < n; ++j) H(i, j) = eval_expr(differentiate(di, j), origin, 0.0);
  }
  // Q[i][j] = 0.5 * Hessian; averaging kills roundoff asymmetry.
  return 0.25 * (H + H.transpose());
}

CareSolution solve_care(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                        const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R) {
  const Eigen::Index n = A.rows();
  const Eigen::Index m = B.cols();
  if (A.cols() != n) throw InputError("Riccati: A must be square");
  if (B.rows() != n) throw InputError("Riccati: B must have as many rows as A");
  if (Q.rows() != n || Q.cols() != n) throw InputError("Riccati: Q must match A");
  if (R.rows() != m || R.cols() != m) throw InputError("Riccati: R must be m x m");
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, Q.cwiseAbs().maxCoeff()))
    throw InputError("Riccati: Q must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> rllt(R);
  if (rllt.info() != Eigen::Success)
    throw InputError("Riccati: R must be symmetric positive definite");
  const Eigen::MatrixXd Rinv_Bt = rllt.solve(B.transpose());

  Eigen::MatrixXd H(2 * n, 2 * n);
  H.topLeftCorner(n, n) = A;
  H.topRightCorner(n, n) = -B * Rinv_Bt;
  H.bottomLeftCorner(n, n) = -Q;
  H.bottomRightCorner(n, n) = -A.transpose();

  Eigen::EigenSolver<Eigen::MatrixXd> es(H);
  if (es.info() != Eigen::Success)
    throw InputError("Riccati: eigendecomposition of the Hamiltonian failed");
  const Eigen::VectorXcd ev = es.eigenvalues();
  std::vector<Eigen::Index> stable;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (std::abs(ev[k].real()) <= 1e-8)
      throw InputError(
          "Riccati: no stabilizing solution (Hamiltonian eigenvalue on the imaginary axis)");
    if (ev[k].real() < 0.0) stable.push_back(k);
  }
  if (static_cast<Eigen::Index>(stable.size()) != n)
    throw InputError("Riccati: stable subspace has dimension " +
                     std::to_string(stable.size()) + ", expected " + std::to_string(n));

  Eigen::MatrixXcd X(2 * n, n);
  for (Eigen::Index j = 0; j < n; ++j) X.col(j) = es.eigenvectors().col(stable[static_cast<std::size_t>(j)]);
  const Eigen::MatrixXcd X1 = X.topRows(n);
  const Eigen::MatrixXcd X2 = X.bottomRows(n);
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(X1);
  if (!lu.isInvertible())
    throw InputError("Riccati: stable subspace is degenerate (pair not stabilizable?)");
  const Eigen::MatrixXcd Pc = X2 * lu.inverse();

  CareSolution sol;
  sol.P = 0.5 * (Pc.real() + Pc.real().transpose());
  sol.K = rllt.solve(B.transpose() * sol.P);

  const Eigen::MatrixXd residual =
      A.transpose() * sol.P + sol.P * A - sol.P * B * rllt.solve(B.transpose() * sol.P) + Q;
  if (residual.norm() > 1e-8 * std::max(1.0, Q.norm()))
    throw InputError("Riccati: residual " + std::to_string(residual.norm()) +
                     " exceeds tolerance; solution rejected");
  const Eigen::VectorXcd cl = (A - B * sol.K).eigenvalues();
  for (Eigen::Index k = 0; k < cl.size(); ++k) {
    if (cl[k].real() >= 0.0)
      throw InputError("Riccati: feedback is not stabilizing (closed-loop eigenvalue with "
                       "nonnegative real part)");
  }
  return sol;
}

const std::vector<double>& exploration_frequency_pool() {
  static const std::vector<double> pool = {
      0.7,
      1.1,
      2.3,
      3.0,
      5.0,
      7.0,
      9.0,
      3.14159265358979324,     // pi
      6.28318530717958648,     // 2 pi
      1.41421356237309505,     // sqrt 2
      1.73205080756887729,     // sqrt 3
      2.23606797749978970,     // sqrt 5
      2.44948974968163588,     // sqrt 6
      2.64575131106459059,     // sqrt 7
      2.71828182845904524,     // e
  };
  return pool;
}

namespace {

std::uint64_t combination_count(std::uint64_t pool, std::uint64_t pick) {
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= pick; ++i) {
    result = result * (pool - pick + i) / i;  // exact: running product of binomials
    if (result > (std::uint64_t{1} << 62)) return result;  // plenty; avoid overflow
  }
  return result;
}

}  // namespace

std::vector<ExprPtr> default_exploration(int count, int num_freq, double ampl, Rng& rng) {
  const std::vector<double>& pool = exploration_frequency_pool();
  const int pool_size = static_cast<int>(pool.size());
  if (count < 0) throw InputError("exploration signal count must be nonnegative");
  if (num_freq < 1) throw InputError("numFreq must be at least 1");
  if (num_freq > pool_size)
    throw InputError("numFreq = " + std::to_string(num_freq) +
                     " exceeds the frequency pool size " + std::to_string(pool_size));
  if (!(ampl >= 0.0)) throw InputError("explAmpl must be nonnegative");
  if (combination_count(static_cast<std::uint64_t>(pool_size),
                        static_cast<std::uint64_t>(num_freq)) <
      static_cast<std::uint64_t>(count))
    throw InputError("cannot generate " + std::to_string(count) +
                     " mutually distinct signals from " + std::to_string(num_freq) +
                     "-frequency draws");

  std::vector<ExprPtr> signals;
  signals.reserve(static_cast<std::size_t>(count));
  std::set<std::vector<int>> used;
  std::vector<int> idx(static_cast<std::size_t>(pool_size));
  for (int s = 0; s < count; ++s) {
    std::vector<int> picked;
    for (int attempt = 0;; ++attempt) {
      if (attempt > 100000)
        throw InputError("exploration signal generation failed to find a fresh draw");
      for (int i = 0; i < pool_size; ++i) idx[static_cast<std::size_t>(i)] = i;
      picked.clear();
      for (int j = 0; j < num_freq; ++j) {
        const int k = j + static_cast<int>(rng.uniform_int(
                              static_cast<std::uint64_t>(pool_size - j)));
        std::swap(idx[static_cast<std::size_t>(j)], idx[static_cast<std::size_t>(k)]);
        picked.push_back(idx[static_cast<std::size_t>(j)]);
      }
      std::vector<int> key = picked;
      std::sort(key.begin(), key.end());
      if (used.insert(key).second) break;
    }
    ExprPtr sum;
    for (int j = 0; j < num_freq; ++j) {
      ExprPtr term = ex::apply(UnaryFn::Sin,
                               ex::mul(ex::num(pool[static_cast<std::size_t>(picked[static_cast<std::size_t>(j)])]),
                                       ex::time()));
      sum = sum ? ex::add(sum, term) : term;
    }
    signals.push_back(ex::mul(ex::num(ampl), sum));
  }
  return signals;
}

std::vector<ExprPtr> default_exploration(int m, int num_freq, double ampl,
                                         std::uint64_t seed) {
  Rng rng(seed);
  return default_exploration(m, num_freq, ampl, rng);
}

VectorExpr feedback_expression(const Eigen::MatrixXd& K) {
  VectorExpr u;
  for (Eigen::Index i = 0; i < K.rows(); ++i) {
    ExprPtr acc = ex::num(0.0);
    for (Eigen::Index j = 0; j < K.cols(); ++j)
      acc = ex::sub(acc, ex::mul(ex::num(K(i, j)), ex::state(static_cast<int>(j))));
    u.rows.push_back(acc);
  }
  return u;
}

VectorExpr default_initial_control(const ControlProblem& sys) {
  const Linearization lin = linearize(sys);
  const Eigen::MatrixXd Q = quadratic_cost_matrix(sys.q, sys.n);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> qe(Q);
  if (qe.eigenvalues().minCoeff() < -1e-10)
    throw InputError(
        "state cost has no positive semidefinite quadratic part at the origin; "
        "supply u0 explicitly");
  const CareSolution care = solve_care(lin.A, lin.B, Q, sys.R);
  return feedback_expression(care.K);
}

namespace {

void require_time_only(const ExprPtr& e, const std::string& what) {
  if (!e) throw InputError(what + " is missing");
  if (max_state_index(*e) >= 0)
    throw InputError(what + " must be a function of t only (found a state reference)");
}

}  // namespace

ExplorationPlan resolve_plan(const ControlProblem& sys, const ModelBasedOptions& opts,
                             Rng& rng) {
  ExplorationPlan plan;
  if (!(opts.dt > 0.0) || !std::isfinite(opts.dt)) throw InputError("dt must be positive");
  if (!(opts.segment > 0.0) || !std::isfinite(opts.segment))
    throw InputError("segment length must be positive");
  if (opts.segment < opts.dt) throw InputError("segment length must be at least dt");
  if (opts.stride < 1) throw InputError("stride must be at least 1");
  plan.dt = opts.dt;
  plan.segment = opts.segment;
  plan.stride = opts.stride;

  if (opts.x_init.empty()) {
    if (opts.x_init_num < 1) throw InputError("xInitNum must be at least 1");
    if (!(opts.x_init_min >= 0.0) || !(opts.x_init_max > opts.x_init_min))
      throw InputError("initial-state band requires 0 <= xInitMin < xInitMax");
    for (int k = 0; k < opts.x_init_num; ++k) {
      Eigen::VectorXd x(sys.n);
      for (int i = 0; i < sys.n; ++i) {
        const double mag = rng.uniform(opts.x_init_min, opts.x_init_max);
        x[i] = rng.coin() ? -mag : mag;
      }
      plan.x_init.push_back(std::move(x));
    }
  } else {
    for (const Eigen::VectorXd& x : opts.x_init) {
      if (x.size() != sys.n)
        throw InputError("xInit rows must have " + std::to_string(sys.n) + " entries, got " +
                         std::to_string(x.size()));
      if (!x.allFinite()) throw InputError("xInit entries must be finite");
    }
    plan.x_init = opts.x_init;
  }
  const std::size_t num_traj = plan.x_init.size();

  if (opts.t_span.empty()) throw InputError("tSpan must not be empty");
  if (opts.t_span.size() == 1) {
    plan.t_span.assign(num_traj, opts.t_span.front());
  } else if (opts.t_span.size() == num_traj) {
    plan.t_span = opts.t_span;
  } else {
    throw InputError("tSpan needs one row or one row per initial state (" +
                     std::to_string(num_traj) + "), got " +
                     std::to_string(opts.t_span.size()));
  }
  for (const auto& [t0, tf] : plan.t_span) {
    if (!std::isfinite(t0) || !std::isfinite(tf) || !(tf > t0))
      throw InputError("each tSpan row must satisfy t0 < tf");
  }

  if (opts.u0.rows.empty()) {
    plan.u0 = default_initial_control(sys);
  } else {
    if (opts.u0.size() != sys.m)
      throw InputError("u0 must have " + std::to_string(sys.m) + " rows, got " +
                       std::to_string(opts.u0.size()));
    for (const ExprPtr& row : opts.u0.rows) {
      if (!row) throw InputError("u0 row is missing");
      check_dimension(*row, sys.n, "u0");
      if (depends_on_time(*row))
        throw InputError("u0 must be a state feedback; t is not allowed");
    }
    plan.u0 = opts.u0;
  }

  const std::size_t m = static_cast<std::size_t>(sys.m);
  if (opts.eta.empty()) {
    const std::vector<ExprPtr> signals = default_exploration(
        static_cast<int>(m * num_traj), opts.num_freq, opts.expl_ampl, rng);
    for (std::size_t k = 0; k < num_traj; ++k) {
      VectorExpr bundle;
      bundle.rows.assign(signals.begin() + static_cast<std::ptrdiff_t>(k * m),
                         signals.begin() + static_cast<std::ptrdiff_t>((k + 1) * m));
      plan.eta.push_back(std::move(bundle));
    }
  } else if (opts.eta.size() == m) {
    VectorExpr bundle;
    bundle.rows = opts.eta;
    for (const ExprPtr& e : bundle.rows) require_time_only(e, "eta");
    plan.eta.assign(num_traj, bundle);
  } else if (opts.eta.size() == m * num_traj) {
    for (std::size_t k = 0; k < num_traj; ++k) {
      VectorExpr bundle;
      bundle.rows.assign(opts.eta.begin() + static_cast<std::ptrdiff_t>(k * m),
                         opts.eta.begin() + static_cast<std::ptrdiff_t>((k + 1) * m));
      for (const ExprPtr& e : bundle.rows) require_time_only(e, "eta");
      plan.eta.push_back(std::move(bundle));
    }
  } else {
    throw InputError("eta needs " + std::to_string(m) + " rows (shared) or " +
                     std::to_string(m * num_traj) + " rows (per trajectory), got " +
                     std::to_string(opts.eta.size()));
  }
  return plan;
}

std::vector<SegmentData> collect_segments(const ControlProblem& sys, int d,
                                          const ExplorationPlan& plan) {
  if (d < 1) throw InputError("degree must be at least 1");
  if (plan.x_init.empty()) throw InputError("no initial states to explore from");
  if (plan.t_span.size() != plan.x_init.size() || plan.eta.size() != plan.x_init.size())
    throw InputError("exploration plan is inconsistent (tSpan/eta rows vs initial states)");
  if (plan.u0.size() != sys.m)
    throw InputError("exploration plan u0 does not match the input dimension");
  for (const VectorExpr& bundle : plan.eta) {
    if (bundle.size() != sys.m)
      throw InputError("exploration plan eta bundles must have m rows");
    for (const ExprPtr& e : bundle.rows) require_time_only(e, "eta");
  }
  if (!(plan.dt > 0.0) || plan.segment < plan.dt || plan.stride < 1)
    throw InputError("exploration plan has invalid dt/segment/stride settings");

  const int n = sys.n;
  const int m = sys.m;
  const BasisSpec value_basis(n, d + 1);
  const BasisSpec ctrl_basis(n, d);
  const std::size_t n2 = static_cast<std::size_t>(ctrl_basis.size());
  const std::size_t quad_dim = 2 + 2 * static_cast<std::size_t>(m) * n2 + n2 * n2;
  if (quad_dim > 50'000'000)
    throw InputError("degree too large: quadrature state would need " +
                     std::to_string(quad_dim) + " accumulators");
  const std::size_t cs_steps =
      static_cast<std::size_t>(std::llround(plan.segment / plan.dt));
  if (cs_steps < 1) throw InputError("segment length must be at least dt");

  const std::size_t num_traj = plan.x_init.size();
  std::vector<std::vector<SegmentData>> per_traj(num_traj);

  parallel_for(num_traj, [&](std::size_t k) {
    const auto [t0, tf] = plan.t_span[k];
    const std::vector<double> grid = uniform_grid(t0, tf, plan.dt);
    const std::size_t steps = grid.size() - 1;
    const std::size_t raw_count = steps / cs_steps;
    if (raw_count < 1)
      throw InputError("tSpan [" + std::to_string(t0) + ", " + std::to_string(tf) +
                       "] is too short for one segment of " + std::to_string(plan.segment) +
                       " s");
    std::vector<std::size_t> checkpoints;
    checkpoints.reserve(raw_count + 1);
    for (std::size_t j = 0; j <= raw_count; ++j) checkpoints.push_back(j * cs_steps);

    const VectorExpr& eta_k = plan.eta[k];
    VectorField field = [&](double t, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
      const Eigen::VectorXd u = plan.u0.eval(x, t) + eta_k.eval(x, t);
      dx = sys.eval_f(x) + sys.eval_g(x) * u;
    };
    Eigen::VectorXd phi(static_cast<Eigen::Index>(n2));
    QuadratureFn quadrature = [&](double t, const Eigen::VectorXd& x, double* out) {
      ctrl_basis.eval(x.data(), phi.data());
      out[0] = sys.eval_q(x);
      const Eigen::VectorXd u0v = plan.u0.eval(x, t);
      const Eigen::VectorXd etav = eta_k.eval(x, t);
      const Eigen::VectorXd Ru0 = sys.R * u0v;
      const Eigen::VectorXd Reta = sys.R * etav;
      out[1] = u0v.dot(Ru0);
      const Eigen::VectorXd Rtotal = Ru0 + Reta;
      kernels::rank1_write(1.0, Reta.data(), static_cast<std::size_t>(m), phi.data(), n2,
                           out + 2);
      kernels::rank1_write(1.0, Rtotal.data(), static_cast<std::size_t>(m), phi.data(), n2,
                           out + 2 + static_cast<std::size_t>(m) * n2);
      kernels::rank1_write(1.0, phi.data(), n2, phi.data(), n2,
                           out + 2 + 2 * static_cast<std::size_t>(m) * n2);
    };

    const auto records = rk4_augmented(field, quadrature, static_cast<int>(quad_dim),
                                       plan.x_init[k], grid, checkpoints);

    std::vector<SegmentData> raw;
    raw.reserve(raw_count);
    const std::size_t alpha_off = 2;
    const std::size_t beta_off = 2 + static_cast<std::size_t>(m) * n2;
    const std::size_t gamma_off = beta_off + static_cast<std::size_t>(m) * n2;
    for (std::size_t j = 1; j <= raw_count; ++j) {
      const Eigen::VectorXd delta = records[j].accum - records[j - 1].accum;
      SegmentData seg;
      seg.x_start = records[j - 1].x;
      seg.x_end = records[j].x;
      seg.phi_jump = value_basis.eval(seg.x_end) - value_basis.eval(seg.x_start);
      seg.int_q = delta[0];
      seg.int_u0Ru0 = delta[1];
      seg.int_alpha = Eigen::Map<const Eigen::MatrixXd>(
          delta.data() + alpha_off, m, static_cast<Eigen::Index>(n2));
      seg.int_beta = Eigen::Map<const Eigen::MatrixXd>(
          delta.data() + beta_off, m, static_cast<Eigen::Index>(n2));
      seg.int_gamma = Eigen::Map<const Eigen::MatrixXd>(
          delta.data() + gamma_off, static_cast<Eigen::Index>(n2),
          static_cast<Eigen::Index>(n2));
      raw.push_back(std::move(seg));
    }
    per_traj[k] = merge_stride(raw, plan.stride, value_basis);
  });

  std::vector<SegmentData> all;
  for (std::vector<SegmentData>& part : per_traj) {
    all.insert(all.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  if (all.empty())
    throw InputError("no segments produced; extend tSpan, shorten segment, or lower stride");
  return all;
}

ModelBasedResult solve_model_based(const ControlProblem& sys, int d,
                                   const ModelBasedOptions& opts) {
  sys.validate();
  if (d < 1) throw InputError("degree must be at least 1");
  Rng rng(opts.seed);
  const ExplorationPlan plan = resolve_plan(sys, opts, rng);
  std::vector<SegmentData> segments = collect_segments(sys, d, plan);

  AdpProblem problem;
  problem.n = sys.n;
  problem.m = sys.m;
  problem.R = sys.R;
  problem.state_cost = [qe = sys.q](const Eigen::VectorXd& x) {
    return eval_expr(qe, x, 0.0);
  };
  problem.d = d;
  problem.crit = opts.crit;
  problem.epsilon = opts.epsilon;
  problem.max_iter = opts.max_iter;
  problem.validate();

  AdpResult res = adp_iterate(segments, problem, "model-based");

  ControllerProvenance prov;
  prov.mode = "model-based";
  prov.iterations = res.report.iterations;
  prov.converged = res.report.converged;
  prov.seed = opts.seed;
  PolynomialController ctrl(sys.n, sys.m, d, std::move(res.coefficients.W),
                            std::move(res.coefficients.c), std::move(prov));
  return ModelBasedResult{std::move(ctrl), std::move(res.report)};
}

}  // namespace adpt
