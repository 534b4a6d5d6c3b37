#pragma once

// Elementwise numeric kernels behind the KNN pipeline.
//
// Each kernel has a scalar reference and SIMD variants (AVX2 on x86-64, NEON
// on AArch64). Variants perform the same IEEE operations per element in the
// same order with no fused multiply-add, so every variant is bit-identical to
// the scalar reference. The variant is chosen once at first use from CPU
// support; TOKENLAB_ISA=scalar|avx2|neon overrides the choice.

#include <span>
#include <string_view>

namespace tokenlab::kernels {

enum class Isa { scalar, avx2, neon };

[[nodiscard]] std::string_view to_string(Isa isa) noexcept;

struct KernelTable {
  /// acc[i] += (column[i] - q)^2
  void (*accumulate_squared_diff)(double* acc, const double* column, std::size_t n, double q);
  /// out[i] = (in[i] - mean) / scale
  void (*standardize)(double* out, const double* in, std::size_t n, double mean, double scale);
};

/// Compiled in and supported by the running CPU.
[[nodiscard]] bool available(Isa isa) noexcept;

/// Kernel table of a specific variant. Throws std::invalid_argument if unavailable.
[[nodiscard]] const KernelTable& table(Isa isa);

/// Variant used by the library.
[[nodiscard]] Isa active_isa() noexcept;

void accumulate_squared_diff(std::span<double> acc, std::span<const double> column, double q);
void standardize(std::span<double> out, std::span<const double> in, double mean, double scale);

namespace detail {
extern const KernelTable kScalarTable;
#if defined(TOKENLAB_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
#if defined(TOKENLAB_HAVE_NEON)
extern const KernelTable kNeonTable;
#endif
}  // namespace detail

}  // namespace tokenlab::kernels
