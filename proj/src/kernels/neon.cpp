// AArch64 only; NEON is baseline there so no runtime check is needed.
#include <arm_neon.h>

#include "tokenlab/kernels/kernels.hpp"

namespace tokenlab::kernels::detail {

namespace {

void accumulate_squared_diff_neon(double* acc, const double* column, std::size_t n, double q) {
  const float64x2_t vq = vdupq_n_f64(q);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(column + i), vq);
    // vmulq + vaddq, not vfmaq: the scalar reference rounds the product.
    vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), vmulq_f64(d, d)));
  }
  for (; i < n; ++i) {
    const double d = column[i] - q;
    acc[i] = acc[i] + d * d;
  }
}

void standardize_neon(double* out, const double* in, std::size_t n, double mean, double scale) {
  const float64x2_t vm = vdupq_n_f64(mean);
  const float64x2_t vs = vdupq_n_f64(scale);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(out + i, vdivq_f64(vsubq_f64(vld1q_f64(in + i), vm), vs));
  }
  for (; i < n; ++i) {
    out[i] = (in[i] - mean) / scale;
  }
}

}  // namespace

const KernelTable kNeonTable{accumulate_squared_diff_neon, standardize_neon};

}  // namespace tokenlab::kernels::detail
