#include "tokenlab/analytics/knn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tokenlab/error.hpp"
#include "tokenlab/kernels/kernels.hpp"

namespace tokenlab::analytics {

std::vector<std::size_t> knn_classify(const FeatureMatrix& train,
                                      std::span<const std::size_t> train_labels,
                                      const FeatureMatrix& test, const KnnConfig& config,
                                      std::size_t class_count) {
  if (config.k == 0 || config.k % 2 == 0) {
    throw ConfigError("knn: k must be a positive odd integer (got " + std::to_string(config.k) + ")");
  }
  const std::size_t n = train.rows();
  if (config.k > n) {
    throw DataError("knn: k = " + std::to_string(config.k) + " exceeds training size " +
                    std::to_string(n));
  }
  if (train_labels.size() != n) {
    throw DataError("knn: label count does not match training rows");
  }
  if (test.rows() > 0 && test.dims() != train.dims()) {
    throw DataError("knn: train and test differ in dimension");
  }
  for (std::size_t label : train_labels) {
    if (label >= class_count) throw DataError("knn: training label out of range");
  }

  const std::size_t k = config.k;
  std::vector<std::size_t> predictions(test.rows());
  std::vector<double> dist2(n);
  std::vector<std::size_t> order(n);
  std::vector<std::size_t> votes(class_count);
  std::vector<double> dist_sum(class_count);

  for (std::size_t t = 0; t < test.rows(); ++t) {
    std::fill(dist2.begin(), dist2.end(), 0.0);
    for (std::size_t d = 0; d < train.dims(); ++d) {
      kernels::accumulate_squared_diff(dist2, train.columns[d], test.columns[d][t]);
    }
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto closer = [&](std::size_t a, std::size_t b) {
      return dist2[a] < dist2[b] || (dist2[a] == dist2[b] && a < b);
    };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      closer);

    std::fill(votes.begin(), votes.end(), 0);
    std::fill(dist_sum.begin(), dist_sum.end(), 0.0);
    for (std::size_t r = 0; r < k; ++r) {
      const std::size_t i = order[r];
      ++votes[train_labels[i]];
      dist_sum[train_labels[i]] += std::sqrt(dist2[i]);
    }
    std::size_t best = class_count;
    for (std::size_t c = 0; c < class_count; ++c) {
      if (votes[c] == 0) continue;
      if (best == class_count || votes[c] > votes[best]) {
        best = c;
        continue;
      }
      if (votes[c] == votes[best]) {
        const double mean_c = dist_sum[c] / static_cast<double>(votes[c]);
        const double mean_best = dist_sum[best] / static_cast<double>(votes[best]);
        if (mean_c < mean_best) best = c;
      }
    }
    predictions[t] = best;
  }
  return predictions;
}

std::size_t class_index(std::span<const std::string> classes, const std::string& label) {
  auto it = std::find(classes.begin(), classes.end(), label);
  if (it == classes.end()) {
    throw DataError("unknown class label '" + label + "'");
  }
  return static_cast<std::size_t>(it - classes.begin());
}

std::vector<std::string> classify_records(std::span<const PerformanceRecord> train,
                                          std::span<const PerformanceRecord> test,
                                          const KnnConfig& config,
                                          std::span<const std::string> classes,
                                          std::span<const std::string> extra_features) {
  const FeatureMatrix raw_train = extract_features(train, extra_features);
  const FeatureMatrix raw_test = extract_features(test, extra_features);
  const Standardized z = standardize(raw_train, raw_test);
  std::vector<std::size_t> labels;
  labels.reserve(train.size());
  for (const auto& r : train) labels.push_back(class_index(classes, r.token_label));
  const auto predicted = knn_classify(z.train, labels, z.test, config, classes.size());
  std::vector<std::string> out;
  out.reserve(predicted.size());
  for (std::size_t p : predicted) out.push_back(classes[p]);
  return out;
}

}  // namespace tokenlab::analytics
