#pragma once

#include <span>
#include <string>
#include <vector>

#include "tokenlab/analytics/features.hpp"
#include "tokenlab/analytics/record.hpp"

namespace tokenlab::analytics {

struct KnnConfig {
  std::size_t k = 5;  // positive and odd

  friend bool operator==(const KnnConfig&, const KnnConfig&) = default;
};

/// Majority label among the k nearest training rows (squared Euclidean
/// distance; equal distances are ordered by training row index).
///
/// A tied vote goes to the class whose voting neighbors have the smallest
/// mean Euclidean distance, then to the lowest class index. Labels are class
/// indices in [0, class_count). Throws DataError when k exceeds the training
/// size, on dimension mismatches or out-of-range labels, and ConfigError when
/// k is zero or even.
[[nodiscard]] std::vector<std::size_t> knn_classify(const FeatureMatrix& train,
                                                    std::span<const std::size_t> train_labels,
                                                    const FeatureMatrix& test,
                                                    const KnnConfig& config,
                                                    std::size_t class_count);

/// extract -> standardize (training statistics) -> knn_classify, over token
/// labels. Returns one predicted label per test record.
[[nodiscard]] std::vector<std::string> classify_records(std::span<const PerformanceRecord> train,
                                                        std::span<const PerformanceRecord> test,
                                                        const KnnConfig& config,
                                                        std::span<const std::string> classes,
                                                        std::span<const std::string> extra_features = {});

/// Index of `label` in `classes`; throws DataError if absent.
[[nodiscard]] std::size_t class_index(std::span<const std::string> classes, const std::string& label);

}  // namespace tokenlab::analytics
