#pragma once

#include <cstddef>

namespace adpt::kernels {

// Hot inner loops of the quadrature/assembly pipeline.  Every operation has a
// scalar reference implementation plus vectorized variants (AVX2+FMA on
// x86-64, NEON on aarch64) selected once at runtime from CPU capabilities.
// The variants are required to agree with the scalar reference to rounding
// accuracy; tests enforce that.

// y[i] += a * x[i]
using AxpyFn = void (*)(double a, const double* x, double* y, std::size_t n);
// out[i] = a * x[i]
using ScaleCopyFn = void (*)(double a, const double* x, double* out, std::size_t n);
// out[i] = w * (x[i] + y[i])   (two-point trapezoid weight application)
using WeightedPairSumFn = void (*)(double w, const double* x, const double* y,
                                   double* out, std::size_t n);
// returns sum_i x[i] * y[i]
using DotFn = double (*)(const double* x, const double* y, std::size_t n);

struct Ops {
  const char* name;
  AxpyFn axpy;
  ScaleCopyFn scale_copy;
  WeightedPairSumFn weighted_pair_sum;
  DotFn dot;
};

enum class Backend { Scalar, Avx2, Neon };

const char* backend_name(Backend backend);

// True when the backend was compiled in and the CPU supports it.
bool backend_available(Backend backend);

// Currently selected backend (best available unless overridden).
Backend active_backend();

// Force a specific backend (used by the equivalence tests).  Throws
// adpt::InputError when the backend is unavailable on this machine.
void set_backend(Backend backend);

const Ops& active_ops();
const Ops& ops_for(Backend backend);  // throws when unavailable

inline void axpy(double a, const double* x, double* y, std::size_t n) {
  active_ops().axpy(a, x, y, n);
}
inline void scale_copy(double a, const double* x, double* out, std::size_t n) {
  active_ops().scale_copy(a, x, out, n);
}
inline void weighted_pair_sum(double w, const double* x, const double* y,
                              double* out, std::size_t n) {
  active_ops().weighted_pair_sum(w, x, y, out, n);
}
inline double dot(const double* x, const double* y, std::size_t n) {
  return active_ops().dot(x, y, n);
}

// a (rows x cols, column-major, leading dimension rows) += w * u * v^T.
// Column-wise axpy; falls back to plain loops for very short columns.
void rank1_update(double w, const double* u, std::size_t rows, const double* v,
                  std::size_t cols, double* a);

// out (rows x cols, column-major) = w * u * v^T.
void rank1_write(double w, const double* u, std::size_t rows, const double* v,
                 std::size_t cols, double* out);

namespace detail {
// Per-backend tables; null when the translation unit was built without the
// matching instruction set.
const Ops* scalar_ops_table();
const Ops* avx2_ops_table();
const Ops* neon_ops_table();
}  // namespace detail

}  // namespace adpt::kernels
