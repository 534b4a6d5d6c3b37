#include <cstdlib>
#include <stdexcept>
#include <string>

#include "tokenlab/kernels/kernels.hpp"

namespace tokenlab::kernels {

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(TOKENLAB_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(TOKENLAB_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!available(isa)) {
    throw std::invalid_argument("kernel variant not available: " + std::string(to_string(isa)));
  }
  switch (isa) {
#if defined(TOKENLAB_HAVE_AVX2)
    case Isa::avx2: return detail::kAvx2Table;
#endif
#if defined(TOKENLAB_HAVE_NEON)
    case Isa::neon: return detail::kNeonTable;
#endif
    default: return detail::kScalarTable;
  }
}

namespace {

Isa select() noexcept {
  if (const char* env = std::getenv("TOKENLAB_ISA")) {
    const std::string_view want(env);
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
      if (want == to_string(isa) && available(isa)) return isa;
    }
  }
  if (available(Isa::avx2)) return Isa::avx2;
  if (available(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

}  // namespace

Isa active_isa() noexcept {
  static const Isa isa = select();
  return isa;
}

namespace {

const KernelTable& active_table() {
  static const KernelTable& t = table(active_isa());
  return t;
}

}  // namespace

void accumulate_squared_diff(std::span<double> acc, std::span<const double> column, double q) {
  if (acc.size() != column.size()) {
    throw std::invalid_argument("accumulate_squared_diff: size mismatch");
  }
  active_table().accumulate_squared_diff(acc.data(), column.data(), acc.size(), q);
}

void standardize(std::span<double> out, std::span<const double> in, double mean, double scale) {
  if (out.size() != in.size()) {
    throw std::invalid_argument("standardize: size mismatch");
  }
  active_table().standardize(out.data(), in.data(), in.size(), mean, scale);
}

}  // namespace tokenlab::kernels
