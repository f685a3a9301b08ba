#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace adpt {

// Integral data of one trajectory segment [r, s].  With value basis
// Phi_{d+1} (length N1) and control basis Phi_d (length N2, a prefix of
// Phi_{d+1}), a segment stores everything the regression needs:
//
//   phi_jump   Phi_{d+1}(x(s)) - Phi_{d+1}(x(r))
//   int_q      ∫ q(x) dt
//   int_u0Ru0  ∫ u0' R u0 dt
//   int_alpha  ∫ R eta Phi_d' dt            (m x N2)
//   int_beta   ∫ R (u0 + eta) Phi_d' dt     (m x N2)
//   int_gamma  ∫ Phi_d Phi_d' dt            (N2 x N2)
//
// The model-based path fills these with RK4-weighted quadrature, the
// model-free path with trapezoid sums over logged samples.
struct SegmentData {
  Eigen::VectorXd x_start, x_end;
  Eigen::VectorXd phi_jump;
  double int_q = 0.0;
  double int_u0Ru0 = 0.0;
  Eigen::MatrixXd int_alpha;
  Eigen::MatrixXd int_beta;
  Eigen::MatrixXd int_gamma;

  // Accumulates the integral fields of `other` (endpoints are untouched;
  // the caller extends x_end / phi_jump when concatenating segments).
  void add_integrals(const SegmentData& other);
};

struct AdpProblem {
  int n = 0;  // state dimension
  int m = 0;  // input dimension
  Eigen::MatrixXd R;  // control weight, symmetric positive definite
  std::function<double(const Eigen::VectorXd&)> state_cost;  // q(x) >= 0
  int d = 1;          // feedback polynomial degree
  int crit = 1;       // stop criterion, see stop_satisfied
  double epsilon = 1e-3;
  int max_iter = 100;

  void validate() const;  // throws InputError on inconsistent settings
};

// One policy iterate: value coefficients c (1 x N1 over Phi_{d+1}) and
// feedback gains W (m x N2 over Phi_d), i.e. u(x) = W Phi_d(x) and
// V(x) = c Phi_{d+1}(x).
struct PolicyCoefficients {
  Eigen::RowVectorXd c;
  Eigen::MatrixXd W;
  int iteration = 0;
};

struct AdpIterate {
  Eigen::RowVectorXd c;
  Eigen::MatrixXd W;
  double delta;  // combined step size vs. previous iterate; NaN for the first
};

struct AdpReport {
  bool converged = false;
  int iterations = 0;      // least-squares solves performed
  double final_delta = 0;  // delta of the last iterate (NaN if only one)
  Eigen::Index columns = 0;
  std::vector<Eigen::Index> ranks;  // regression rank per iteration
  std::vector<AdpIterate> history;
  std::vector<std::string> warnings;
  std::string data_tag;  // caller-supplied label of the data source
};

struct AdpResult {
  PolicyCoefficients coefficients;
  AdpReport report;
};

// Builds the regression A z = b for the current iteration, where
// z = [c' ; vec(W)] stacks the value coefficients and the column-major
// vectorized gains.  Row k reads
//
//   i = 0:   [ phi_jump'  |  2 vec(int_alpha)' ]                z = -(int_q + int_u0Ru0)
//   i >= 1:  [ phi_jump'  |  2 vec(int_beta - R W_prev int_gamma)' ] z
//              = -int_q - <W_prev' R W_prev, int_gamma>
//
// previous == nullptr selects the first-iteration form.
void assemble(const std::vector<SegmentData>& segments, const AdpProblem& problem,
              const PolicyCoefficients* previous, Eigen::MatrixXd& A,
              Eigen::VectorXd& b);

struct LeastSquares {
  Eigen::VectorXd solution;  // minimum-norm least-squares solution
  Eigen::Index rank = 0;     // numerical rank of A
  double residual = 0.0;     // |A z - b|
};

// Singular-value based minimum-norm solve with explicit rank reporting.
LeastSquares solve_least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

// Stop criteria over successive iterates (dc = |c_i - c_{i-1}|,
// dW = Frobenius norm of the gain step):
//   0: dc <= eps
//   1: dc^2 + dW^2 <= eps^2          (default)
//   2: dc <= eps |c_{i-1}|
//   3: dc^2 + dW^2 <= eps^2 (|c_{i-1}|^2 + |W_{i-1}|^2)
// *delta always receives sqrt(dc^2 + dW^2).
bool stop_satisfied(int crit, double eps, const PolicyCoefficients& prev,
                    const PolicyCoefficients& cur, double* delta);

// Full policy iteration: assemble / solve / test until the criterion holds
// or max_iter solves are spent.  Throws ExcitationError when the first
// regression matrix is column-rank deficient and DivergenceError when the
// coefficients blow up; later rank drops only produce warnings.  data_tag
// labels the data source in the report.
AdpResult adp_iterate(const std::vector<SegmentData>& segments,
                      const AdpProblem& problem, const std::string& data_tag = "");

class BasisSpec;

// Merges each run of `stride` consecutive segments into one: the integral
// fields accumulate left to right (so a merged integral is exactly the
// ordered sum of its parts), the endpoints span the whole run, and phi_jump
// is recomputed from the merged endpoints with value_basis (Phi_{d+1}).
// A tail shorter than `stride` is dropped.  Segments must be consecutive
// pieces of one trajectory; stride = 1 returns the input unchanged.
std::vector<SegmentData> merge_stride(const std::vector<SegmentData>& raw, int stride,
                                      const BasisSpec& value_basis);

}  // namespace adpt
