#pragma once

// Seeded randomness used by every stochastic component.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The standard distributions are not (their algorithms are
// implementation-defined), so the draws below are implemented here with
// documented algorithms to keep datasets reproducible across toolchains.

#include <cstdint>
#include <random>

namespace tokenlab {

/// Independent sub-streams derived from one seed.
enum class Stream : std::uint64_t {
  fundamental = 1,
  flow = 2,
  agent = 3,
  behavior = 4,
  split = 5,
  subject = 6,
  cohort = 7,
  scratch = 8,
  session = 9,
};

/// SplitMix64 finalizer.
[[nodiscard]] std::uint64_t mix64(std::uint64_t x) noexcept;

/// Sub-seed for (base, stream, index). Distinct inputs give well-separated
/// outputs; the mapping is part of the reproducibility contract.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t base, Stream stream,
                                        std::uint64_t index = 0) noexcept;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();

  /// Uniform integer in [0, n). Rejection sampling, unbiased. n must be > 0.
  std::uint64_t below(std::uint64_t n);

  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via the Box-Muller transform (pairs are cached).
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

  /// Poisson by sequential-search inversion; large means are split into
  /// chunks of at most 30 and summed, which leaves the distribution exact.
  std::uint64_t poisson(double mean);

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace tokenlab
