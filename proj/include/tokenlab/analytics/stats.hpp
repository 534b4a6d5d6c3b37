#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "tokenlab/analytics/record.hpp"

namespace tokenlab::analytics {

struct TokenStats {
  std::size_t count = 0;
  double mean = 0.0;
  /// Sample standard deviation; empty when count < 2.
  std::optional<double> sd;
};

struct CohortStats {
  std::map<std::string, TokenStats> by_token;
};

/// Per-token empirical mean, sample sd and count of net_profit.
/// Throws DataError on empty input.
[[nodiscard]] CohortStats cohort_stats(std::span<const PerformanceRecord> records);

/// True when no two token means are equal.
[[nodiscard]] bool means_pairwise_distinct(const CohortStats& stats);

}  // namespace tokenlab::analytics
