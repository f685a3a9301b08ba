#include "adpt/adp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "adpt/basis.hpp"
#include "adpt/errors.hpp"
#include "adpt/kernels.hpp"
#include "adpt/parallel.hpp"

namespace adpt {
namespace {

constexpr double kCoefficientBound = 1e9;

void check_segments(const std::vector<SegmentData>& segments) {
  if (segments.empty()) throw InputError("adp: no segments provided");
  const auto& first = segments[0];
  const Eigen::Index n1 = first.phi_jump.size();
  const Eigen::Index m = first.int_alpha.rows();
  const Eigen::Index n2 = first.int_alpha.cols();
  if (n1 < n2 || n2 < 1)
    throw InputError("adp: segment basis dimensions are inconsistent");
  for (const auto& seg : segments) {
    if (seg.phi_jump.size() != n1 || seg.int_alpha.rows() != m ||
        seg.int_alpha.cols() != n2 || seg.int_beta.rows() != m ||
        seg.int_beta.cols() != n2 || seg.int_gamma.rows() != n2 ||
        seg.int_gamma.cols() != n2)
      throw InputError("adp: segments have inconsistent dimensions");
  }
}

}  // namespace

void SegmentData::add_integrals(const SegmentData& other) {
  int_q += other.int_q;
  int_u0Ru0 += other.int_u0Ru0;
  int_alpha += other.int_alpha;
  int_beta += other.int_beta;
  int_gamma += other.int_gamma;
}

void AdpProblem::validate() const {
  if (n < 1) throw InputError("adp: state dimension must be >= 1");
  if (m < 1) throw InputError("adp: input dimension must be >= 1");
  if (d < 1) throw InputError("adp: degree must be >= 1");
  if (crit < 0 || crit > 3)
    throw InputError("adp: stop criterion must be one of 0, 1, 2, 3");
  if (!(epsilon > 0.0)) throw InputError("adp: epsilon must be positive");
  if (max_iter < 1) throw InputError("adp: max_iter must be >= 1");
  if (R.rows() != m || R.cols() != m)
    throw InputError("adp: R must be " + std::to_string(m) + "x" + std::to_string(m));
  const double scale = std::max(1.0, R.cwiseAbs().maxCoeff());
  if ((R - R.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw InputError("adp: R must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(R);
  if (llt.info() != Eigen::Success)
    throw InputError("adp: R must be positive definite");
}

void assemble(const std::vector<SegmentData>& segments, const AdpProblem& problem,
              const PolicyCoefficients* previous, Eigen::MatrixXd& A,
              Eigen::VectorXd& b) {
  check_segments(segments);
  const Eigen::Index K = static_cast<Eigen::Index>(segments.size());
  const Eigen::Index n1 = segments[0].phi_jump.size();
  const Eigen::Index m = segments[0].int_alpha.rows();
  const Eigen::Index n2 = segments[0].int_alpha.cols();
  if (m != problem.m)
    throw InputError("adp: segment input dimension does not match the problem");
  const Eigen::Index cols = n1 + m * n2;
  A.resize(K, cols);
  b.resize(K);

  if (!previous) {
    parallel_for(static_cast<std::size_t>(K), [&](std::size_t k) {
      const SegmentData& seg = segments[k];
      const Eigen::Index row = static_cast<Eigen::Index>(k);
      A.block(row, 0, 1, n1) = seg.phi_jump.transpose();
      A.block(row, n1, 1, m * n2) =
          2.0 * Eigen::Map<const Eigen::RowVectorXd>(seg.int_alpha.data(), m * n2);
      b[row] = -(seg.int_q + seg.int_u0Ru0);
    });
    return;
  }

  if (previous->W.rows() != m || previous->W.cols() != n2)
    throw InputError("adp: previous gains have the wrong shape");
  const Eigen::MatrixXd RW = problem.R * previous->W;          // m x N2
  const Eigen::MatrixXd S = previous->W.transpose() * RW;      // N2 x N2
  parallel_for(static_cast<std::size_t>(K), [&](std::size_t k) {
    const SegmentData& seg = segments[k];
    const Eigen::Index row = static_cast<Eigen::Index>(k);
    A.block(row, 0, 1, n1) = seg.phi_jump.transpose();
    Eigen::MatrixXd M = seg.int_beta;
    M.noalias() -= RW * seg.int_gamma;
    A.block(row, n1, 1, m * n2) =
        2.0 * Eigen::Map<const Eigen::RowVectorXd>(M.data(), m * n2);
    b[row] = -seg.int_q - kernels::dot(S.data(), seg.int_gamma.data(),
                                       static_cast<std::size_t>(n2 * n2));
  });
}

LeastSquares solve_least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  if (A.rows() != b.size())
    throw InputError("least squares: A and b have mismatched rows");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(static_cast<double>(std::max(A.rows(), A.cols())) *
                   std::numeric_limits<double>::epsilon());
  LeastSquares out;
  out.rank = svd.rank();
  out.solution = svd.solve(b);
  out.residual = (A * out.solution - b).norm();
  return out;
}

bool stop_satisfied(int crit, double eps, const PolicyCoefficients& prev,
                    const PolicyCoefficients& cur, double* delta) {
  const double dc = (cur.c - prev.c).norm();
  const double dw = (cur.W - prev.W).norm();  // Frobenius
  if (delta) *delta = std::sqrt(dc * dc + dw * dw);
  switch (crit) {
    case 0:
      return dc <= eps;
    case 1:
      return dc * dc + dw * dw <= eps * eps;
    case 2:
      return dc <= eps * prev.c.norm();
    case 3:
      return dc * dc + dw * dw <=
             eps * eps * (prev.c.squaredNorm() + prev.W.squaredNorm());
    default:
      throw InputError("adp: stop criterion must be one of 0, 1, 2, 3");
  }
}

AdpResult adp_iterate(const std::vector<SegmentData>& segments,
                      const AdpProblem& problem, const std::string& data_tag) {
  problem.validate();
  check_segments(segments);
  const Eigen::Index n1 = segments[0].phi_jump.size();
  const Eigen::Index m = segments[0].int_alpha.rows();
  const Eigen::Index n2 = segments[0].int_alpha.cols();
  const Eigen::Index cols = n1 + m * n2;

  AdpResult result;
  AdpReport& rep = result.report;
  rep.columns = cols;
  rep.data_tag = data_tag;
  rep.final_delta = std::numeric_limits<double>::quiet_NaN();

  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  PolicyCoefficients prev;
  bool have_prev = false;

  for (int i = 0; i < problem.max_iter; ++i) {
    assemble(segments, problem, have_prev ? &prev : nullptr, A, b);
    const LeastSquares ls = solve_least_squares(A, b);
    rep.ranks.push_back(ls.rank);
    if (ls.rank < cols) {
      if (i == 0)
        throw ExcitationError(
            "persistent excitation failure: the first regression matrix has rank " +
            std::to_string(ls.rank) + " but " + std::to_string(cols) +
            " unknowns; add trajectories or use a richer exploration signal");
      rep.warnings.push_back("iteration " + std::to_string(i) +
                             ": regression rank dropped to " +
                             std::to_string(ls.rank) + " of " + std::to_string(cols));
    }

    PolicyCoefficients cur;
    cur.c = ls.solution.head(n1).transpose();
    cur.W = Eigen::Map<const Eigen::MatrixXd>(ls.solution.data() + n1, m, n2);
    cur.iteration = i;
    if (!cur.c.allFinite() || !cur.W.allFinite() ||
        cur.c.cwiseAbs().maxCoeff() > kCoefficientBound ||
        cur.W.cwiseAbs().maxCoeff() > kCoefficientBound)
      throw DivergenceError("policy iteration diverged at iteration " +
                                std::to_string(i),
                            static_cast<double>(i));

    double delta = std::numeric_limits<double>::quiet_NaN();
    bool stop = false;
    if (have_prev) stop = stop_satisfied(problem.crit, problem.epsilon, prev, cur, &delta);
    rep.history.push_back({cur.c, cur.W, delta});
    rep.iterations = i + 1;
    rep.final_delta = delta;
    prev = std::move(cur);
    have_prev = true;
    if (stop) {
      rep.converged = true;
      break;
    }
  }

  result.coefficients = prev;
  return result;
}

std::vector<SegmentData> merge_stride(const std::vector<SegmentData>& raw, int stride,
                                      const BasisSpec& value_basis) {
  if (stride < 1) throw InputError("stride must be at least 1");
  if (stride == 1) return raw;
  std::vector<SegmentData> merged;
  const std::size_t count = raw.size() / static_cast<std::size_t>(stride);
  merged.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t base = i * static_cast<std::size_t>(stride);
    SegmentData seg = raw[base];
    for (int j = 1; j < stride; ++j) seg.add_integrals(raw[base + static_cast<std::size_t>(j)]);
    seg.x_end = raw[base + static_cast<std::size_t>(stride) - 1].x_end;
    seg.phi_jump = value_basis.eval(seg.x_end) - value_basis.eval(seg.x_start);
    merged.push_back(std::move(seg));
  }
  return merged;
}

}  // namespace adpt
