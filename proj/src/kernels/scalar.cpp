#include "tokenlab/kernels/kernels.hpp"

namespace tokenlab::kernels::detail {

namespace {

void accumulate_squared_diff_scalar(double* acc, const double* column, std::size_t n, double q) {
  for (std::size_t i = 0; i < n; ++i) {
    const double d = column[i] - q;
    acc[i] = acc[i] + d * d;
  }
}

void standardize_scalar(double* out, const double* in, std::size_t n, double mean, double scale) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = (in[i] - mean) / scale;
  }
}

}  // namespace

const KernelTable kScalarTable{accumulate_squared_diff_scalar, standardize_scalar};

}  // namespace tokenlab::kernels::detail
