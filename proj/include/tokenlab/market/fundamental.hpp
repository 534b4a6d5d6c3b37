#pragma once

#include <cstdint>
#include <vector>

#include "tokenlab/market/types.hpp"

namespace tokenlab::market {

inline constexpr double kMinDriftTarget = 0.02;
inline constexpr double kMaxDriftTarget = 0.05;
inline constexpr double kDriftTolerance = 0.005;

struct FundamentalPath {
  std::vector<Ticks> values;  // one per session step
  double drift_target = 0.0;

  [[nodiscard]] double terminal_return() const;

  friend bool operator==(const FundamentalPath&, const FundamentalPath&) = default;
};

struct FundamentalParams {
  Ticks start_price = 10000;
  int steps = 390;
  double drift_target = 0.03;
  /// Per-step standard deviation of log-price increments before pinning.
  double volatility = 0.0002;
  Ticks tick_size = 1;
  /// Permits drift targets outside [0.02, 0.05] for what-if runs.
  bool allow_drift_override = false;
};

/// Log-price random walk turned into a bridge that starts at start_price and
/// ends at start_price * (1 + drift_target), rounded to the tick grid.
///
/// Throws std::invalid_argument on steps < 2, a nonpositive start price, a
/// negative volatility, or an out-of-range drift target without override.
[[nodiscard]] FundamentalPath generate_fundamental(std::uint64_t seed,
                                                   const FundamentalParams& params);

}  // namespace tokenlab::market
