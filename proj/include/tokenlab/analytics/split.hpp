#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tokenlab/analytics/record.hpp"

namespace tokenlab::analytics {

enum class SplitMode : std::uint8_t { pooled_random, fixed_counts };

struct SplitCounts {
  std::size_t train = 0;
  std::size_t test = 0;

  friend bool operator==(const SplitCounts&, const SplitCounts&) = default;
};

struct SplitSpec {
  SplitMode mode = SplitMode::pooled_random;
  double ratio = 0.7;  // training fraction, pooled mode
  std::uint64_t seed = 0;
  std::map<std::string, SplitCounts> fixed_counts;  // by token label

  friend bool operator==(const SplitSpec&, const SplitSpec&) = default;
};

struct Partition {
  std::vector<PerformanceRecord> train;
  std::vector<PerformanceRecord> test;
};

/// Disjoint, exhaustive train/test partition; both halves keep input order.
///
/// pooled_random: a uniform sample of floor(ratio * N) records for training,
/// no stratification. fixed_counts: per token, a uniform sample of exactly
/// the configured training count. Throws DataError on an empty input or a
/// per-token table that does not match the data (the message names the token)
/// and ConfigError on a ratio outside (0, 1).
[[nodiscard]] Partition split(std::span<const PerformanceRecord> records, const SplitSpec& spec);

}  // namespace tokenlab::analytics
