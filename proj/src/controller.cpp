#include "adpt/controller.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "adpt/errors.hpp"
#include "adpt/integrate.hpp"

namespace adpt {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

PolynomialController::PolynomialController(int n, int m, int d, Eigen::MatrixXd W,
                                           Eigen::RowVectorXd c,
                                           ControllerProvenance provenance)
    : n_(n), m_(m), d_(d), basis_(n, d + 1), W_(std::move(W)), c_(std::move(c)),
      prov_(std::move(provenance)) {
  if (m_ < 1) throw InputError("controller: input dimension must be at least 1");
  n2_ = static_cast<int>(basis_size(n_, d_));
  const int n1 = static_cast<int>(basis_.size());
  if (W_.rows() != m_ || W_.cols() != n2_) {
    throw InputError("controller: gain matrix must be " + std::to_string(m_) + "x" +
                     std::to_string(n2_) + ", got " + std::to_string(W_.rows()) + "x" +
                     std::to_string(W_.cols()));
  }
  if (c_.size() != n1) {
    throw InputError("controller: value coefficient row must have " + std::to_string(n1) +
                     " entries, got " + std::to_string(c_.size()));
  }
  if (!W_.allFinite() || !c_.allFinite())
    throw InputError("controller: coefficients must be finite");
}

Eigen::VectorXd PolynomialController::eval_control(
    const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != n_)
    throw InputError("controller: state has " + std::to_string(x.size()) +
                     " entries, expected " + std::to_string(n_));
  const Eigen::VectorXd phi = basis_.eval(x);
  return W_ * phi.head(n2_);
}

double PolynomialController::eval_value(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != n_)
    throw InputError("controller: state has " + std::to_string(x.size()) +
                     " entries, expected " + std::to_string(n_));
  return c_.dot(basis_.eval(x));
}

void save_controller(const PolynomialController& ctrl, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  const ControllerProvenance& p = ctrl.provenance();
  out << "ADPT-CONTROLLER v1\n";
  out << "n " << ctrl.state_dim() << "\n";
  out << "m " << ctrl.input_dim() << "\n";
  out << "d " << ctrl.degree() << "\n";
  out << "mode " << (p.mode.empty() ? "file" : p.mode) << "\n";
  out << "iterations " << p.iterations << "\n";
  out << "converged " << (p.converged ? 1 : 0) << "\n";
  out << "seed " << p.seed << "\n";
  out << "W\n";
  const Eigen::MatrixXd& W = ctrl.gains();
  for (Eigen::Index r = 0; r < W.rows(); ++r) {
    for (Eigen::Index c = 0; c < W.cols(); ++c) {
      if (c) out << ' ';
      out << fmt_double(W(r, c));
    }
    out << "\n";
  }
  out << "c\n";
  const Eigen::RowVectorXd& c = ctrl.value_coefficients();
  for (Eigen::Index j = 0; j < c.size(); ++j) {
    if (j) out << ' ';
    out << fmt_double(c[j]);
  }
  out << "\n";
  if (!out) throw InputError("failed while writing '" + path + "'");
}

namespace {

struct LineReader {
  std::ifstream in;
  std::string path;
  int lineno = 0;

  explicit LineReader(const std::string& p) : in(p), path(p) {
    if (!in) throw InputError("cannot open controller file '" + p + "'");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(path + ":" + std::to_string(lineno) + ": " + what);
  }

  std::string next(const std::string& expectation) {
    std::string line;
    if (!std::getline(in, line)) {
      ++lineno;
      fail("unexpected end of file, expected " + expectation);
    }
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

  // "key value" with a fixed key
  std::string keyed(const std::string& key) {
    std::string line = next("'" + key + " ...'");
    if (line.size() <= key.size() || line.compare(0, key.size(), key) != 0 ||
        line[key.size()] != ' ') {
      fail("expected '" + key + " ...', got '" + line + "'");
    }
    return line.substr(key.size() + 1);
  }

  long long keyed_int(const std::string& key) {
    std::string value = keyed(key);
    try {
      std::size_t used = 0;
      long long v = std::stoll(value, &used);
      if (used != value.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      fail("value of '" + key + "' is not an integer: '" + value + "'");
    }
  }

  Eigen::RowVectorXd row(Eigen::Index want, const std::string& what) {
    std::string line = next(what + " row");
    std::istringstream ss(line);
    std::vector<double> vals;
    std::string tok;
    while (ss >> tok) {
      try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("trailing");
        vals.push_back(v);
      } catch (const std::exception&) {
        fail(what + " row contains a non-numeric token '" + tok + "'");
      }
    }
    if (static_cast<Eigen::Index>(vals.size()) != want) {
      fail(what + " row has " + std::to_string(vals.size()) + " values, expected " +
           std::to_string(want));
    }
    Eigen::RowVectorXd out(want);
    for (Eigen::Index j = 0; j < want; ++j) {
      if (!std::isfinite(vals[static_cast<std::size_t>(j)]))
        fail(what + " row contains a non-finite value");
      out[j] = vals[static_cast<std::size_t>(j)];
    }
    return out;
  }
};

}  // namespace

PolynomialController load_controller(const std::string& path) {
  LineReader r(path);
  std::string header = r.next("the 'ADPT-CONTROLLER v1' header");
  if (header != "ADPT-CONTROLLER v1")
    r.fail("not a controller file (bad header '" + header + "')");
  const long long n = r.keyed_int("n");
  const long long m = r.keyed_int("m");
  const long long d = r.keyed_int("d");
  if (n < 1 || n > 64) r.fail("state dimension out of range");
  if (m < 1 || m > 64) r.fail("input dimension out of range");
  if (d < 1 || d > 32) r.fail("degree out of range");
  ControllerProvenance prov;
  prov.mode = r.keyed("mode");
  prov.iterations = static_cast<int>(r.keyed_int("iterations"));
  prov.converged = r.keyed_int("converged") != 0;
  {
    std::string seed = r.keyed("seed");
    try {
      std::size_t used = 0;
      prov.seed = std::stoull(seed, &used);
      if (used != seed.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      r.fail("value of 'seed' is not an unsigned integer: '" + seed + "'");
    }
  }
  const auto n2 = static_cast<Eigen::Index>(basis_size(static_cast<int>(n), static_cast<int>(d)));
  const auto n1 =
      static_cast<Eigen::Index>(basis_size(static_cast<int>(n), static_cast<int>(d) + 1));
  if (r.next("the 'W' marker") != "W") r.fail("expected the 'W' marker line");
  Eigen::MatrixXd W(m, n2);
  for (Eigen::Index i = 0; i < m; ++i) W.row(i) = r.row(n2, "gain");
  if (r.next("the 'c' marker") != "c") r.fail("expected the 'c' marker line");
  Eigen::RowVectorXd c = r.row(n1, "value coefficient");
  return PolynomialController(static_cast<int>(n), static_cast<int>(m), static_cast<int>(d),
                              std::move(W), std::move(c), std::move(prov));
}

Simulation simulate_closed_loop(const ControlProblem& sys, const PolynomialController& ctrl,
                                const Eigen::VectorXd& x0, double tf, double dt) {
  if (ctrl.state_dim() != sys.n || ctrl.input_dim() != sys.m)
    throw InputError("controller dimensions (" + std::to_string(ctrl.state_dim()) + "," +
                     std::to_string(ctrl.input_dim()) + ") do not match the system (" +
                     std::to_string(sys.n) + "," + std::to_string(sys.m) + ")");
  if (x0.size() != sys.n)
    throw InputError("initial state has " + std::to_string(x0.size()) +
                     " entries, expected " + std::to_string(sys.n));
  if (!(tf > 0.0) || !(dt > 0.0)) throw InputError("tf and dt must be positive");

  VectorField field = [&](double, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
    const Eigen::VectorXd u = ctrl.eval_control(x);
    dx = sys.eval_f(x) + sys.eval_g(x) * u;
  };
  QuadratureFn cost = [&](double, const Eigen::VectorXd& x, double* out) {
    const Eigen::VectorXd u = ctrl.eval_control(x);
    out[0] = sys.eval_q(x) + u.dot(sys.R * u);
  };

  const std::vector<double> grid = uniform_grid(0.0, tf, dt);
  std::vector<std::size_t> checkpoints(grid.size());
  std::iota(checkpoints.begin(), checkpoints.end(), std::size_t{0});
  const auto records = rk4_augmented(field, cost, 1, x0, grid, checkpoints);

  Simulation sim;
  sim.t.reserve(records.size());
  sim.x.reserve(records.size());
  sim.u.reserve(records.size());
  sim.cost.reserve(records.size());
  for (const auto& rec : records) {
    sim.t.push_back(rec.t);
    sim.x.push_back(rec.x);
    sim.u.push_back(ctrl.eval_control(rec.x));
    sim.cost.push_back(rec.accum[0]);
  }
  sim.total_cost = sim.cost.back();
  const Eigen::VectorXd& xe = sim.x.back();
  const Eigen::VectorXd& ue = sim.u.back();
  sim.tail_integrand = sys.eval_q(xe) + ue.dot(sys.R * ue);
  return sim;
}

void save_trajectory_csv(const Simulation& sim, const std::string& path) {
  if (sim.t.empty()) throw InputError("empty simulation, nothing to write");
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  const Eigen::Index n = sim.x.front().size();
  const Eigen::Index m = sim.u.front().size();
  out << "t";
  for (Eigen::Index i = 1; i <= n; ++i) out << ",x" << i;
  for (Eigen::Index i = 1; i <= m; ++i) out << ",u" << i;
  out << ",cost_so_far\n";
  for (std::size_t k = 0; k < sim.t.size(); ++k) {
    out << fmt_double(sim.t[k]);
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << fmt_double(sim.x[k][i]);
    for (Eigen::Index i = 0; i < m; ++i) out << ',' << fmt_double(sim.u[k][i]);
    out << ',' << fmt_double(sim.cost[k]) << "\n";
  }
  if (!out) throw InputError("failed while writing '" + path + "'");
}

}  // namespace adpt
