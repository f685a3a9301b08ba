#pragma once

#include <Eigen/Dense>

#include "adpt/expr.hpp"

namespace adpt {

// Control-affine plant xdot = f(x) + g(x) u with running cost
// q(x) + u' R u.  The dynamics are autonomous: f, g and q must not
// reference t.  The regulator setup additionally expects f(0) = 0.
struct ControlProblem {
  int n = 0;
  int m = 0;
  VectorExpr f;       // n rows
  MatrixExpr g;       // n x m
  ExprPtr q;          // scalar state cost, q(x) >= 0 with q(0) = 0
  Eigen::MatrixXd R;  // m x m, symmetric positive definite

  void validate() const;  // dimension / symmetry / autonomy checks

  Eigen::VectorXd eval_f(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::MatrixXd eval_g(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  double eval_q(const Eigen::Ref<const Eigen::VectorXd>& x) const;
};

}  // namespace adpt
