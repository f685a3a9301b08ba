#include "adpt/basis.hpp"

#include <map>
#include <numeric>
#include <string>

#include "adpt/errors.hpp"

namespace adpt {
namespace {

// C(a, b) in 64 bits with overflow detection.  The running product
// result_k = C(a-b+k, k) stays integral, and after dividing out
// g = gcd(result, i) the remaining denominator divides the new factor
// exactly, so every step is a single checked multiply.
std::uint64_t binomial_checked(std::uint64_t a, std::uint64_t b) {
  if (b > a) return 0;
  b = std::min(b, a - b);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= b; ++i) {
    const std::uint64_t num = a - b + i;
    const std::uint64_t g = std::gcd(result, i);
    if (__builtin_mul_overflow(result / g, num / (i / g), &result))
      throw InputError("basis_size: monomial count overflows 64 bits");
  }
  return result;
}

// Generates all exponent vectors of total degree deg over n variables in
// descending lexicographic order (x1 most significant).
void emit_degree_block(int n, int deg, std::vector<int>& current, int pos,
                       std::vector<int>& flat) {
  if (pos == n - 1) {
    current[pos] = deg;
    flat.insert(flat.end(), current.begin(), current.end());
    current[pos] = 0;
    return;
  }
  for (int e = deg; e >= 0; --e) {
    current[pos] = e;
    emit_degree_block(n, deg - e, current, pos + 1, flat);
  }
  current[pos] = 0;
}

}  // namespace

std::uint64_t basis_size(int n, int d) {
  if (n < 1) throw InputError("basis_size: state dimension must be >= 1");
  if (d < 1) throw InputError("basis_size: degree must be >= 1");
  std::uint64_t total = 0;
  for (int i = 1; i <= d; ++i) {
    const std::uint64_t block =
        binomial_checked(static_cast<std::uint64_t>(i) + n - 1, n - 1);
    if (__builtin_add_overflow(total, block, &total))
      throw InputError("basis_size: monomial count overflows 64 bits");
  }
  return total;
}

BasisSpec::BasisSpec(int n, int d) : n_(n), d_(d) {
  const std::uint64_t count = basis_size(n, d);  // validates n, d
  constexpr std::uint64_t kEnumerationCap = 10'000'000;
  if (count > kEnumerationCap)
    throw InputError("monomial basis with " + std::to_string(count) +
                     " entries is too large to enumerate");
  size_ = static_cast<int>(count);
  exponents_.reserve(static_cast<std::size_t>(size_) * n_);

  std::vector<int> current(n_, 0);
  for (int deg = 1; deg <= d_; ++deg)
    emit_degree_block(n_, deg, current, 0, exponents_);

  degrees_.resize(size_);
  var_.resize(size_);
  parent_.resize(size_);
  grad_index_.assign(static_cast<std::size_t>(size_) * n_, -2);

  std::map<std::vector<int>, int> index_of;
  std::vector<int> key(n_);
  for (int j = 0; j < size_; ++j) {
    const int* e = &exponents_[static_cast<std::size_t>(j) * n_];
    int deg = 0;
    for (int k = 0; k < n_; ++k) deg += e[k];
    degrees_[j] = deg;
    key.assign(e, e + n_);
    index_of[key] = j;

    // Incremental evaluation: strip one power off the first active variable.
    int first = 0;
    while (e[first] == 0) ++first;
    var_[j] = first;
    if (deg == 1) {
      parent_[j] = -1;
    } else {
      key.assign(e, e + n_);
      --key[first];
      parent_[j] = index_of.at(key);  // lower degree -> already inserted
    }
  }

  // Gradient lookup: index of e - unit_k for every active variable.
  for (int j = 0; j < size_; ++j) {
    const int* e = &exponents_[static_cast<std::size_t>(j) * n_];
    for (int k = 0; k < n_; ++k) {
      if (e[k] == 0) continue;
      if (degrees_[j] == 1) {
        grad_index_[static_cast<std::size_t>(j) * n_ + k] = -1;
        continue;
      }
      key.assign(e, e + n_);
      --key[k];
      grad_index_[static_cast<std::size_t>(j) * n_ + k] = index_of.at(key);
    }
  }
}

std::vector<int> BasisSpec::exponent(int j) const {
  if (j < 0 || j >= size_) throw InputError("BasisSpec::exponent: index out of range");
  const int* e = &exponents_[static_cast<std::size_t>(j) * n_];
  return std::vector<int>(e, e + n_);
}

void BasisSpec::eval(const double* x, double* out) const {
  for (int j = 0; j < size_; ++j) {
    const double xv = x[var_[j]];
    out[j] = parent_[j] < 0 ? xv : out[parent_[j]] * xv;
  }
}

Eigen::VectorXd BasisSpec::eval(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != n_)
    throw InputError("BasisSpec::eval: state has dimension " +
                     std::to_string(x.size()) + ", expected " + std::to_string(n_));
  Eigen::VectorXd out(size_);
  eval(x.data(), out.data());
  return out;
}

Eigen::MatrixXd BasisSpec::jacobian(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != n_)
    throw InputError("BasisSpec::jacobian: state has dimension " +
                     std::to_string(x.size()) + ", expected " + std::to_string(n_));
  Eigen::VectorXd vals(size_);
  eval(x.data(), vals.data());
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(size_, n_);
  for (int j = 0; j < size_; ++j) {
    const int* e = &exponents_[static_cast<std::size_t>(j) * n_];
    for (int k = 0; k < n_; ++k) {
      if (e[k] == 0) continue;
      const int idx = grad_index_[static_cast<std::size_t>(j) * n_ + k];
      jac(j, k) = e[k] * (idx == -1 ? 1.0 : vals[idx]);
    }
  }
  return jac;
}

}  // namespace adpt
