#pragma once

#include <span>
#include <string>
#include <vector>

#include "tokenlab/analytics/record.hpp"

namespace tokenlab::analytics {

/// Column-major feature matrix: columns[d][i] is feature d of row i.
struct FeatureMatrix {
  std::vector<std::vector<double>> columns;

  [[nodiscard]] std::size_t dims() const noexcept { return columns.size(); }
  [[nodiscard]] std::size_t rows() const noexcept {
    return columns.empty() ? 0 : columns.front().size();
  }

  /// Build from row-major points; all rows must share one dimension.
  [[nodiscard]] static FeatureMatrix from_rows(const std::vector<std::vector<double>>& rows);
};

/// net_profit followed by the named extra features, in the given order.
/// Throws DataError if a record lacks a named extra feature.
[[nodiscard]] FeatureMatrix extract_features(std::span<const PerformanceRecord> records,
                                             std::span<const std::string> extra_features = {});

struct StandardizeParams {
  std::vector<double> mean;
  std::vector<double> scale;
  /// Features with zero training spread, passed through unscaled.
  std::vector<bool> constant;
  bool any_constant = false;
};

struct Standardized {
  FeatureMatrix train;
  FeatureMatrix test;
  StandardizeParams params;
};

/// z-scores from training statistics only: population standard deviation
/// (divide by n). Throws DataError on an empty training set or a test
/// dimension mismatch.
[[nodiscard]] Standardized standardize(const FeatureMatrix& train, const FeatureMatrix& test);

}  // namespace tokenlab::analytics
