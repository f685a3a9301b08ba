#include "adpt/system.hpp"

#include <string>

#include "adpt/errors.hpp"

namespace adpt {

void ControlProblem::validate() const {
  if (n < 1) throw InputError("system: state dimension n must be >= 1");
  if (m < 1) throw InputError("system: input dimension m must be >= 1");
  if (f.size() != n)
    throw InputError("system: f has " + std::to_string(f.size()) +
                     " rows, expected n = " + std::to_string(n));
  if (g.rows != n || g.cols != m)
    throw InputError("system: g is " + std::to_string(g.rows) + "x" +
                     std::to_string(g.cols) + ", expected " + std::to_string(n) +
                     "x" + std::to_string(m));
  if (!q) throw InputError("system: state cost q is missing");
  for (int i = 0; i < n; ++i) {
    check_dimension(*f.rows[i], n, "f row " + std::to_string(i + 1));
    if (depends_on_time(*f.rows[i]))
      throw InputError("system: f must be autonomous (row " + std::to_string(i + 1) +
                       " references t)");
  }
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < m; ++c) {
      check_dimension(*g.at(r, c), n,
                      "g(" + std::to_string(r + 1) + "," + std::to_string(c + 1) + ")");
      if (depends_on_time(*g.at(r, c)))
        throw InputError("system: g must be autonomous (entry (" +
                         std::to_string(r + 1) + "," + std::to_string(c + 1) +
                         ") references t)");
    }
  check_dimension(*q, n, "q");
  if (depends_on_time(*q))
    throw InputError("system: the state cost q must not reference t");
  if (R.rows() != m || R.cols() != m)
    throw InputError("system: R is " + std::to_string(R.rows()) + "x" +
                     std::to_string(R.cols()) + ", expected " + std::to_string(m) +
                     "x" + std::to_string(m));
  const double scale = std::max(1.0, R.cwiseAbs().maxCoeff());
  if ((R - R.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw InputError("system: R must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(R);
  if (llt.info() != Eigen::Success)
    throw InputError("system: R must be positive definite");
}

Eigen::VectorXd ControlProblem::eval_f(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return f.eval(x, 0.0);
}

Eigen::MatrixXd ControlProblem::eval_g(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return g.eval(x, 0.0);
}

double ControlProblem::eval_q(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return eval_expr(*q, x.data(), static_cast<int>(x.size()), 0.0);
}

}  // namespace adpt
