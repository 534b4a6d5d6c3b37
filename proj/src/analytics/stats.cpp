#include "tokenlab/analytics/stats.hpp"

#include <cmath>
#include <vector>

#include "tokenlab/error.hpp"

namespace tokenlab::analytics {

CohortStats cohort_stats(std::span<const PerformanceRecord> records) {
  if (records.empty()) {
    throw DataError("cohort_stats: no records");
  }
  std::map<std::string, std::vector<double>> values;
  for (const auto& r : records) values[r.token_label].push_back(r.net_profit);

  CohortStats out;
  for (const auto& [label, xs] : values) {
    TokenStats s;
    s.count = xs.size();
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(xs.size());
    if (xs.size() >= 2) {
      double ss = 0.0;
      for (double x : xs) ss += (x - s.mean) * (x - s.mean);
      s.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    out.by_token.emplace(label, s);
  }
  return out;
}

bool means_pairwise_distinct(const CohortStats& stats) {
  for (auto a = stats.by_token.begin(); a != stats.by_token.end(); ++a) {
    for (auto b = std::next(a); b != stats.by_token.end(); ++b) {
      if (a->second.mean == b->second.mean) return false;
    }
  }
  return true;
}

}  // namespace tokenlab::analytics
