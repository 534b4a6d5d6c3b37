// Built with -mavx2 and only called after a runtime CPU check.
#include <immintrin.h>

#include "tokenlab/kernels/kernels.hpp"

namespace tokenlab::kernels::detail {

namespace {

void accumulate_squared_diff_avx2(double* acc, const double* column, std::size_t n, double q) {
  const __m256d vq = _mm256_set1_pd(q);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(column + i), vq);
    const __m256d a = _mm256_loadu_pd(acc + i);
    _mm256_storeu_pd(acc + i, _mm256_add_pd(a, _mm256_mul_pd(d, d)));
  }
  for (; i < n; ++i) {
    const double d = column[i] - q;
    acc[i] = acc[i] + d * d;
  }
}

void standardize_avx2(double* out, const double* in, std::size_t n, double mean, double scale) {
  const __m256d vm = _mm256_set1_pd(mean);
  const __m256d vs = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(in + i);
    _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_sub_pd(x, vm), vs));
  }
  for (; i < n; ++i) {
    out[i] = (in[i] - mean) / scale;
  }
}

}  // namespace

const KernelTable kAvx2Table{accumulate_squared_diff_avx2, standardize_avx2};

}  // namespace tokenlab::kernels::detail
