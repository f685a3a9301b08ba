#include "adpt/kernels.hpp"

// NEON variants for aarch64, where the instruction set is part of the
// baseline (no special compile flags or runtime probing needed).

#if defined(__aarch64__) && defined(__ARM_NEON)

#include <arm_neon.h>

namespace adpt::kernels {
namespace {

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    float64x2_t y0 = vld1q_f64(y + i);
    float64x2_t y1 = vld1q_f64(y + i + 2);
    float64x2_t y2 = vld1q_f64(y + i + 4);
    float64x2_t y3 = vld1q_f64(y + i + 6);
    y0 = vfmaq_f64(y0, va, vld1q_f64(x + i));
    y1 = vfmaq_f64(y1, va, vld1q_f64(x + i + 2));
    y2 = vfmaq_f64(y2, va, vld1q_f64(x + i + 4));
    y3 = vfmaq_f64(y3, va, vld1q_f64(x + i + 6));
    vst1q_f64(y + i, y0);
    vst1q_f64(y + i + 2, y1);
    vst1q_f64(y + i + 4, y2);
    vst1q_f64(y + i + 6, y3);
  }
  for (; i + 2 <= n; i += 2) {
    float64x2_t yv = vld1q_f64(y + i);
    vst1q_f64(y + i, vfmaq_f64(yv, va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scale_copy_neon(double a, const double* x, double* out, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(out + i, vmulq_f64(va, vld1q_f64(x + i)));
  for (; i < n; ++i) out[i] = a * x[i];
}

void weighted_pair_sum_neon(double w, const double* x, const double* y,
                            double* out, std::size_t n) {
  const float64x2_t vw = vdupq_n_f64(w);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t s = vaddq_f64(vld1q_f64(x + i), vld1q_f64(y + i));
    vst1q_f64(out + i, vmulq_f64(vw, s));
  }
  for (; i < n; ++i) out[i] = w * (x[i] + y[i]);
}

double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  for (; i + 2 <= n; i += 2)
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
  double total = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) total += x[i] * y[i];
  return total;
}

const Ops kNeonOps{"neon", axpy_neon, scale_copy_neon, weighted_pair_sum_neon,
                   dot_neon};

}  // namespace

namespace detail {
const Ops* neon_ops_table() { return &kNeonOps; }
}  // namespace detail

}  // namespace adpt::kernels

#else  // not an aarch64 build

namespace adpt::kernels::detail {
const Ops* neon_ops_table() { return nullptr; }
}  // namespace adpt::kernels::detail

#endif
