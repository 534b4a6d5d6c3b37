#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace tokenlab::analytics {

/// One subject's session outcome under one token condition.
struct PerformanceRecord {
  std::uint64_t record_id = 0;
  std::uint64_t subject_id = 0;
  std::string token_label;  // "T1".."T7"
  double net_profit = 0.0;  // currency units (ticks x shares)
  std::uint64_t seed = 0;
  std::map<std::string, double> extra_features;

  friend bool operator==(const PerformanceRecord&, const PerformanceRecord&) = default;
};

}  // namespace tokenlab::analytics
