#include "tokenlab/analytics/features.hpp"

#include <algorithm>
#include <cmath>

#include "tokenlab/error.hpp"
#include "tokenlab/kernels/kernels.hpp"

namespace tokenlab::analytics {

FeatureMatrix FeatureMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  FeatureMatrix m;
  if (rows.empty()) return m;
  const std::size_t dims = rows.front().size();
  m.columns.assign(dims, std::vector<double>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dims) {
      throw DataError("feature rows differ in dimension");
    }
    for (std::size_t d = 0; d < dims; ++d) m.columns[d][i] = rows[i][d];
  }
  return m;
}

FeatureMatrix extract_features(std::span<const PerformanceRecord> records,
                               std::span<const std::string> extra_features) {
  FeatureMatrix m;
  m.columns.assign(1 + extra_features.size(), std::vector<double>(records.size()));
  for (std::size_t i = 0; i < records.size(); ++i) {
    m.columns[0][i] = records[i].net_profit;
    for (std::size_t d = 0; d < extra_features.size(); ++d) {
      auto it = records[i].extra_features.find(extra_features[d]);
      if (it == records[i].extra_features.end()) {
        throw DataError("record " + std::to_string(records[i].record_id) +
                        " lacks feature '" + extra_features[d] + "'");
      }
      m.columns[d + 1][i] = it->second;
    }
  }
  return m;
}

Standardized standardize(const FeatureMatrix& train, const FeatureMatrix& test) {
  if (train.rows() == 0) {
    throw DataError("standardize: empty training set");
  }
  if (test.rows() > 0 && test.dims() != train.dims()) {
    throw DataError("standardize: train and test differ in dimension");
  }
  Standardized out;
  const std::size_t dims = train.dims();
  const auto n = static_cast<double>(train.rows());
  out.params.mean.resize(dims);
  out.params.scale.resize(dims);
  out.params.constant.resize(dims);
  out.train.columns.resize(dims);
  out.test.columns.resize(test.rows() > 0 ? dims : 0);

  for (std::size_t d = 0; d < dims; ++d) {
    const auto& col = train.columns[d];
    double sum = 0.0;
    for (double x : col) sum += x;
    const double mean = sum / n;
    double ss = 0.0;
    for (double x : col) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / n);

    const bool flat = std::all_of(col.begin(), col.end(), [&](double x) { return x == col[0]; });
    if (!flat && sd > 0.0 && std::isfinite(sd)) {
      out.params.mean[d] = mean;
      out.params.scale[d] = sd;
    } else {
      out.params.mean[d] = 0.0;
      out.params.scale[d] = 1.0;
      out.params.constant[d] = true;
      out.params.any_constant = true;
    }
    out.train.columns[d].resize(col.size());
    kernels::standardize(out.train.columns[d], col, out.params.mean[d], out.params.scale[d]);
    if (test.rows() > 0) {
      out.test.columns[d].resize(test.rows());
      kernels::standardize(out.test.columns[d], test.columns[d], out.params.mean[d],
                           out.params.scale[d]);
    }
  }
  return out;
}

}  // namespace tokenlab::analytics
