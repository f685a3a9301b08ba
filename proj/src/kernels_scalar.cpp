#include "adpt/kernels.hpp"

// Reference implementations.  Deliberately straightforward: these define the
// semantics the vectorized backends are tested against.

namespace adpt::kernels {
namespace {

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_copy_scalar(double a, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i];
}

void weighted_pair_sum_scalar(double w, const double* x, const double* y,
                              double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = w * (x[i] + y[i]);
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

const Ops kScalarOps{"scalar", axpy_scalar, scale_copy_scalar,
                     weighted_pair_sum_scalar, dot_scalar};

}  // namespace

namespace detail {
const Ops* scalar_ops_table() { return &kScalarOps; }
}  // namespace detail

}  // namespace adpt::kernels
