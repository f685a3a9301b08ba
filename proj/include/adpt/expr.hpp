#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

namespace adpt {

// Small symbolic expression language used for dynamics, costs, feedback laws
// and exploration signals.  Grammar (no implicit multiplication):
//
//   expression := term (('+' | '-') term)*
//   term       := factor (('*' | '/') factor)*
//   factor     := '-' factor | power
//   power      := primary ('^' factor)?          (right associative)
//   primary    := number | 'pi' | 't' | x<k> | fn '(' expression ')'
//               | '(' expression ')'
//
// so -x1^2 parses as -(x1^2) and 2^-3 is valid.  Functions: sin, cos, tan,
// exp, log, sqrt, abs.  States are x1..xn (1-based in the surface syntax,
// 0-based in the API); 't' is time.

enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class UnaryFn { Neg, Sin, Cos, Tan, Exp, Log, Sqrt, Abs };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Number, State, Time, Unary, Binary };
  Kind kind = Kind::Number;
  double value = 0.0;           // Number
  int index = -1;               // State, 0-based
  UnaryFn fn = UnaryFn::Neg;    // Unary
  BinaryOp op = BinaryOp::Add;  // Binary
  ExprPtr a, b;                 // operands; b is null for Unary
  int pos = -1;                 // 0-based offset in the source, -1 if synthesized
};

// Node constructors.  The arithmetic ones fold constants and eliminate
// zero/one identities, which keeps symbolic derivatives compact.
namespace ex {
ExprPtr num(double v);
ExprPtr state(int index_zero_based);
ExprPtr time();
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr sub(ExprPtr a, ExprPtr b);
ExprPtr mul(ExprPtr a, ExprPtr b);
ExprPtr div(ExprPtr a, ExprPtr b);
ExprPtr pow(ExprPtr a, ExprPtr b);
ExprPtr neg(ExprPtr a);
ExprPtr apply(UnaryFn fn, ExprPtr a);
}  // namespace ex

// Parses a single scalar expression.  Throws ParseError with a 1-based
// column on syntax errors, unknown identifiers and function arity mistakes.
ExprPtr parse_expression(const std::string& src);

// Evaluates at state x (length n) and time t.  Throws EvalError on domain
// violations (division by zero, log/sqrt outside their domain, 0^negative,
// fractional powers of negatives) and InputError when the expression
// references a state beyond n.
double eval_expr(const Expr& e, const double* x, int n, double t);
double eval_expr(const ExprPtr& e, const Eigen::Ref<const Eigen::VectorXd>& x,
                 double t);
inline double eval_expr(const ExprPtr& e, const double* x, int n, double t) {
  return eval_expr(*e, x, n, t);
}

// Exact partial derivative with respect to state `var` (0-based), with
// constant folding.  abs() is rejected (not differentiable at 0).
ExprPtr differentiate(const ExprPtr& e, int var);

// Canonical text form; parse_expression(to_string(e)) reproduces the value
// of e everywhere.
std::string to_string(const ExprPtr& e);

// Largest 0-based state index referenced, or -1 when the expression is
// state-free.
int max_state_index(const Expr& e);
bool depends_on_time(const Expr& e);
inline int max_state_index(const ExprPtr& e) { return max_state_index(*e); }
inline bool depends_on_time(const ExprPtr& e) { return depends_on_time(*e); }

// Throws InputError when the expression references states beyond dimension n.
void check_dimension(const Expr& e, int n, const std::string& what);
inline void check_dimension(const ExprPtr& e, int n, const std::string& what) {
  check_dimension(*e, n, what);
}

// ';'-separated rows of scalar expressions, e.g. "x2; -3*x1 + u".
struct VectorExpr {
  std::vector<ExprPtr> rows;
  int size() const { return static_cast<int>(rows.size()); }
  Eigen::VectorXd eval(const Eigen::Ref<const Eigen::VectorXd>& x, double t) const;
};

// ';'-separated rows, ','-separated columns; all rows must have equal length.
struct MatrixExpr {
  int rows = 0, cols = 0;
  std::vector<ExprPtr> entries;  // row-major
  const ExprPtr& at(int r, int c) const { return entries[r * cols + c]; }
  Eigen::MatrixXd eval(const Eigen::Ref<const Eigen::VectorXd>& x, double t) const;
};

VectorExpr parse_vector_expression(const std::string& src);
MatrixExpr parse_matrix_expression(const std::string& src);

// Matrix literal: like parse_matrix_expression but every entry must fold to
// a number (no states, no time).
Eigen::MatrixXd parse_numeric_matrix(const std::string& src);

}  // namespace adpt
