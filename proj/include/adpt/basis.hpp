#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace adpt {

// Number of monomials in n variables with total degree between 1 and d
// (the constant monomial is excluded).  Throws InputError for n < 1 or
// d < 1 and std::overflow_error-style InputError when the count does not
// fit in 64 bits.
std::uint64_t basis_size(int n, int d);

// Graded monomial basis Phi_d(x): all monomials of total degree 1..d,
// ordered by ascending total degree and, inside a degree block, by
// descending lexicographic exponent order with x1 most significant:
//   n=2, d=2  ->  x1, x2, x1^2, x1*x2, x2^2.
// With this ordering Phi_d is a prefix of Phi_{d+1}, which the solver
// exploits by evaluating only the larger basis.
class BasisSpec {
 public:
  BasisSpec(int n, int d);

  int state_dim() const { return n_; }
  int degree() const { return d_; }
  int size() const { return size_; }

  // Exponent vector of monomial j (length n).
  std::vector<int> exponent(int j) const;
  int monomial_degree(int j) const { return degrees_[j]; }

  // Evaluates all monomials at x into out (length size()).  Incremental:
  // each monomial of degree >= 2 is a degree-(k-1) monomial times one
  // variable, so the whole basis costs one multiply per entry.
  void eval(const double* x, double* out) const;
  Eigen::VectorXd eval(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  // size() x n matrix of partial derivatives d(monomial_j)/d(x_k).
  Eigen::MatrixXd jacobian(const Eigen::Ref<const Eigen::VectorXd>& x) const;

 private:
  int n_ = 0;
  int d_ = 0;
  int size_ = 0;
  std::vector<int> exponents_;   // flat, size_ * n_
  std::vector<int> degrees_;     // total degree per monomial
  std::vector<int> var_;         // variable multiplied onto the parent
  std::vector<int> parent_;      // index of the reduced monomial, -1 for degree 1
  std::vector<int> grad_index_;  // flat size_ * n_: index of e - unit_k,
                                 // -1 when the result is the constant 1,
                                 // -2 when e_k == 0 (derivative vanishes)
};

inline BasisSpec enumerate_monomials(int n, int d) { return BasisSpec(n, d); }

inline Eigen::VectorXd eval_basis(const BasisSpec& spec,
                                  const Eigen::Ref<const Eigen::VectorXd>& x) {
  return spec.eval(x);
}

inline Eigen::MatrixXd eval_basis_jacobian(const BasisSpec& spec,
                                           const Eigen::Ref<const Eigen::VectorXd>& x) {
  return spec.jacobian(x);
}

}  // namespace adpt
