#include "adpt/model_free.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>

#include "adpt/basis.hpp"
#include "adpt/errors.hpp"
#include "adpt/kernels.hpp"
#include "adpt/parallel.hpp"

namespace adpt {

std::size_t TrajectoryLog::total_samples() const {
  std::size_t total = 0;
  for (const auto& traj : trajectories) total += traj.size();
  return total;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

std::vector<std::string> expected_columns(int n, int m) {
  std::vector<std::string> cols;
  cols.push_back("t");
  for (int i = 1; i <= n; ++i) cols.push_back("x" + std::to_string(i));
  for (int i = 1; i <= m; ++i) cols.push_back("u0_" + std::to_string(i));
  for (int i = 1; i <= m; ++i) cols.push_back("eta_" + std::to_string(i));
  return cols;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ",";
    out += parts[i];
  }
  return out;
}

double parse_cell(const std::string& cell, const std::string& path, int lineno,
                  const std::string& column) {
  if (cell.empty())
    throw ParseError(path + ":" + std::to_string(lineno) + ": column '" + column +
                     "' is empty");
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + cell.size())
    throw ParseError(path + ":" + std::to_string(lineno) + ": column '" + column +
                     "' is not a number: '" + cell + "'");
  if (!std::isfinite(v))
    throw ParseError(path + ":" + std::to_string(lineno) + ": column '" + column +
                     "' is not finite: '" + cell + "'");
  return v;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

TrajectoryLog load_trajectories(const std::string& path, int n, int m) {
  if (n < 1 || m < 1) throw InputError("trajectory data needs n >= 1 and m >= 1");
  std::ifstream in(path);
  if (!in) throw InputError("cannot open data file '" + path + "'");

  TrajectoryLog log;
  log.n = n;
  log.m = m;

  const std::vector<std::string> expected = expected_columns(n, m);
  bool have_traj_column = false;
  bool header_seen = false;
  std::string line;
  int lineno = 0;
  double prev_t = 0.0;
  double prev_traj_id = 0.0;
  std::vector<TrajectorySample>* current = nullptr;

  while (std::getline(in, line)) {
    ++lineno;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    std::vector<std::string> cells = split_csv(text);

    if (!header_seen) {
      header_seen = true;
      if (cells.size() == expected.size() + 1 && cells.back() == "traj") {
        have_traj_column = true;
      } else if (cells.size() != expected.size()) {
        throw ParseError(path + ":" + std::to_string(lineno) + ": header has " +
                         std::to_string(cells.size()) + " columns, expected " +
                         std::to_string(expected.size()) + " (" + join(expected) +
                         ") or " + std::to_string(expected.size() + 1) +
                         " with a trailing 'traj' column");
      }
      for (std::size_t j = 0; j < expected.size(); ++j) {
        if (cells[j] != expected[j])
          throw ParseError(path + ":" + std::to_string(lineno) + ": header column " +
                           std::to_string(j + 1) + " is '" + cells[j] + "' but '" +
                           expected[j] + "' was expected for n=" + std::to_string(n) +
                           ", m=" + std::to_string(m));
      }
      continue;
    }

    const std::size_t want = expected.size() + (have_traj_column ? 1 : 0);
    if (cells.size() != want)
      throw ParseError(path + ":" + std::to_string(lineno) + ": row has " +
                       std::to_string(cells.size()) + " columns, expected " +
                       std::to_string(want));

    TrajectorySample sample;
    sample.t = parse_cell(cells[0], path, lineno, "t");
    sample.x.resize(n);
    sample.u0.resize(m);
    sample.eta.resize(m);
    std::size_t cell = 1;
    for (int i = 0; i < n; ++i, ++cell)
      sample.x[i] = parse_cell(cells[cell], path, lineno, expected[cell]);
    for (int i = 0; i < m; ++i, ++cell)
      sample.u0[i] = parse_cell(cells[cell], path, lineno, expected[cell]);
    for (int i = 0; i < m; ++i, ++cell)
      sample.eta[i] = parse_cell(cells[cell], path, lineno, expected[cell]);

    bool fresh;
    if (have_traj_column) {
      const double traj_id = parse_cell(cells[cell], path, lineno, "traj");
      fresh = (current == nullptr) || traj_id != prev_traj_id;
      prev_traj_id = traj_id;
      if (!fresh && sample.t <= prev_t)
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": time must increase strictly within a trajectory (t = " +
                         fmt_double(sample.t) + " after " + fmt_double(prev_t) + ")");
    } else {
      fresh = (current == nullptr) || sample.t <= prev_t;
    }
    if (fresh) {
      log.trajectories.emplace_back();
      current = &log.trajectories.back();
    }
    prev_t = sample.t;
    current->push_back(std::move(sample));
  }

  if (!header_seen) throw ParseError(path + ": file has no header row");
  if (log.trajectories.empty()) throw ParseError(path + ": file has no data rows");
  for (std::size_t k = 0; k < log.trajectories.size(); ++k) {
    if (log.trajectories[k].size() < 2)
      throw ParseError(path + ": trajectory " + std::to_string(k + 1) + " has " +
                       std::to_string(log.trajectories[k].size()) +
                       " sample(s); at least 2 are required");
  }
  return log;
}

void save_trajectories(const TrajectoryLog& log, const std::string& path) {
  if (log.n < 1 || log.m < 1) throw InputError("trajectory log has invalid dimensions");
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  std::vector<std::string> cols = expected_columns(log.n, log.m);
  cols.push_back("traj");
  out << join(cols) << "\n";
  for (std::size_t k = 0; k < log.trajectories.size(); ++k) {
    for (const TrajectorySample& s : log.trajectories[k]) {
      if (s.x.size() != log.n || s.u0.size() != log.m || s.eta.size() != log.m)
        throw InputError("trajectory log sample dimensions are inconsistent");
      out << fmt_double(s.t);
      for (int i = 0; i < log.n; ++i) out << ',' << fmt_double(s.x[i]);
      for (int i = 0; i < log.m; ++i) out << ',' << fmt_double(s.u0[i]);
      for (int i = 0; i < log.m; ++i) out << ',' << fmt_double(s.eta[i]);
      out << ',' << (k + 1) << "\n";
    }
  }
  if (!out) throw InputError("failed while writing '" + path + "'");
}

std::vector<SegmentData> build_segments(
    const TrajectoryLog& log, const std::function<double(const Eigen::VectorXd&)>& q,
    const Eigen::MatrixXd& R, int d, int stride, std::vector<std::string>* warnings) {
  if (log.n < 1 || log.m < 1) throw InputError("trajectory log has invalid dimensions");
  if (d < 1) throw InputError("degree must be at least 1");
  if (stride < 1) throw InputError("stride must be at least 1");
  if (!q) throw InputError("state cost evaluator is missing");
  if (R.rows() != log.m || R.cols() != log.m)
    throw InputError("R must be " + std::to_string(log.m) + "x" + std::to_string(log.m));

  const int n = log.n;
  const int m = log.m;
  const BasisSpec value_basis(n, d + 1);
  const BasisSpec ctrl_basis(n, d);
  const Eigen::Index n2 = ctrl_basis.size();
  const std::size_t ustride = static_cast<std::size_t>(stride);

  // Per-sample values feeding the trapezoid sums.
  struct SampleVals {
    Eigen::VectorXd phi;   // Phi_d(x)
    double q = 0.0;        // q(x)
    double u0Ru0 = 0.0;    // u0' R u0
    Eigen::VectorXd Reta;  // R eta
    Eigen::VectorXd Rtot;  // R (u0 + eta)
  };

  const std::size_t num_traj = log.trajectories.size();
  std::vector<std::vector<SegmentData>> per_traj(num_traj);

  parallel_for(num_traj, [&](std::size_t k) {
    const std::vector<TrajectorySample>& samples = log.trajectories[k];
    if (samples.size() < 2)
      throw InputError("trajectory " + std::to_string(k + 1) + " has fewer than 2 samples");
    const std::size_t intervals = samples.size() - 1;
    const std::size_t count = intervals / ustride;
    if (count == 0) return;

    auto fill = [&](const TrajectorySample& s, SampleVals& v) {
      if (s.x.size() != n || s.u0.size() != m || s.eta.size() != m)
        throw InputError("trajectory log sample dimensions are inconsistent");
      v.phi = ctrl_basis.eval(s.x);
      v.q = q(s.x);
      v.u0Ru0 = s.u0.dot(R * s.u0);
      v.Reta = R * s.eta;
      v.Rtot = v.Reta + R * s.u0;
    };

    std::vector<SegmentData> segs;
    segs.reserve(count);
    SampleVals slots[2];
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t base = i * ustride;
      SegmentData seg;
      seg.x_start = samples[base].x;
      seg.x_end = samples[base + ustride].x;
      seg.int_alpha = Eigen::MatrixXd::Zero(m, n2);
      seg.int_beta = Eigen::MatrixXd::Zero(m, n2);
      seg.int_gamma = Eigen::MatrixXd::Zero(n2, n2);
      fill(samples[base], slots[0]);
      for (std::size_t j = 0; j < ustride; ++j) {
        const TrajectorySample& a = samples[base + j];
        const TrajectorySample& b = samples[base + j + 1];
        const double h = b.t - a.t;
        if (!(h > 0.0))
          throw InputError("trajectory " + std::to_string(k + 1) +
                           " has a non-increasing time step at sample " +
                           std::to_string(base + j + 2));
        const SampleVals& va = slots[j % 2];
        SampleVals& vb = slots[(j + 1) % 2];
        fill(b, vb);
        const double w = 0.5 * h;
        seg.int_q += w * (va.q + vb.q);
        seg.int_u0Ru0 += w * (va.u0Ru0 + vb.u0Ru0);
        const std::size_t um = static_cast<std::size_t>(m);
        const std::size_t un2 = static_cast<std::size_t>(n2);
        kernels::rank1_update(w, va.Reta.data(), um, va.phi.data(), un2,
                              seg.int_alpha.data());
        kernels::rank1_update(w, vb.Reta.data(), um, vb.phi.data(), un2,
                              seg.int_alpha.data());
        kernels::rank1_update(w, va.Rtot.data(), um, va.phi.data(), un2,
                              seg.int_beta.data());
        kernels::rank1_update(w, vb.Rtot.data(), um, vb.phi.data(), un2,
                              seg.int_beta.data());
        kernels::rank1_update(w, va.phi.data(), un2, va.phi.data(), un2,
                              seg.int_gamma.data());
        kernels::rank1_update(w, vb.phi.data(), un2, vb.phi.data(), un2,
                              seg.int_gamma.data());
      }
      seg.phi_jump = value_basis.eval(seg.x_end) - value_basis.eval(seg.x_start);
      segs.push_back(std::move(seg));
    }
    per_traj[k] = std::move(segs);
  });

  std::vector<SegmentData> all;
  for (std::vector<SegmentData>& part : per_traj) {
    all.insert(all.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  if (all.empty())
    throw InputError("no segments: every trajectory is shorter than stride+1 = " +
                     std::to_string(stride + 1) + " samples");

  if (warnings) {
    // Coarse-sampling heuristic: estimate the dominant signal frequency as
    // RMS(d eta/dt) / RMS(eta); trapezoid quadrature degrades once
    // frequency * sample period approaches 1.
    double sum_eta2 = 0.0, sum_deriv2 = 0.0;
    std::size_t n_eta = 0, n_deriv = 0;
    std::vector<double> periods;
    for (const auto& traj : log.trajectories) {
      for (std::size_t j = 0; j < traj.size(); ++j) {
        sum_eta2 += traj[j].eta.squaredNorm();
        n_eta += static_cast<std::size_t>(m);
        if (j + 1 < traj.size()) {
          const double h = traj[j + 1].t - traj[j].t;
          periods.push_back(h);
          sum_deriv2 += ((traj[j + 1].eta - traj[j].eta) / h).squaredNorm();
          n_deriv += static_cast<std::size_t>(m);
        }
      }
    }
    if (sum_eta2 > 0.0 && n_deriv > 0) {
      const double rms_eta = std::sqrt(sum_eta2 / static_cast<double>(n_eta));
      const double rms_deriv = std::sqrt(sum_deriv2 / static_cast<double>(n_deriv));
      std::sort(periods.begin(), periods.end());
      const double median_dt = periods[periods.size() / 2];
      const double omega = rms_deriv / rms_eta;
      if (omega * median_dt > 0.5) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "sampling looks coarse: estimated signal frequency %.3g rad/s vs "
                      "median sample period %.3g s; trapezoid integrals may be inaccurate",
                      omega, median_dt);
        warnings->push_back(buf);
      }
    }
  }
  return all;
}

ModelFreeResult solve_model_free(const TrajectoryLog& log, const ExprPtr& q,
                                 const Eigen::MatrixXd& R, int d,
                                 const ModelFreeOptions& opts) {
  if (!q) throw InputError("state cost expression is missing");
  check_dimension(*q, log.n, "state cost");

  AdpProblem problem;
  problem.n = log.n;
  problem.m = log.m;
  problem.R = R;
  problem.state_cost = [qe = q](const Eigen::VectorXd& x) { return eval_expr(qe, x, 0.0); };
  problem.d = d;
  problem.crit = opts.crit;
  problem.epsilon = opts.epsilon;
  problem.max_iter = opts.max_iter;
  problem.validate();

  std::vector<std::string> warnings;
  std::vector<SegmentData> segments =
      build_segments(log, problem.state_cost, R, d, opts.stride, &warnings);

  AdpResult res = adp_iterate(segments, problem, "model-free");
  res.report.warnings.insert(res.report.warnings.begin(), warnings.begin(), warnings.end());

  ControllerProvenance prov;
  prov.mode = "model-free";
  prov.iterations = res.report.iterations;
  prov.converged = res.report.converged;
  prov.seed = 0;
  PolynomialController ctrl(log.n, log.m, d, std::move(res.coefficients.W),
                            std::move(res.coefficients.c), std::move(prov));
  return ModelFreeResult{std::move(ctrl), std::move(res.report)};
}

}  // namespace adpt
