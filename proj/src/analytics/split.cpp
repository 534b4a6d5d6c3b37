#include "tokenlab/analytics/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tokenlab/error.hpp"
#include "tokenlab/rng.hpp"

namespace tokenlab::analytics {

namespace {

void shuffle(std::vector<std::size_t>& idx, Rng& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(idx[i - 1], idx[j]);
  }
}

Partition gather(std::span<const PerformanceRecord> records, std::vector<bool> is_train) {
  Partition p;
  for (std::size_t i = 0; i < records.size(); ++i) {
    (is_train[i] ? p.train : p.test).push_back(records[i]);
  }
  return p;
}

}  // namespace

Partition split(std::span<const PerformanceRecord> records, const SplitSpec& spec) {
  if (records.empty()) {
    throw DataError("split: no records");
  }
  Rng rng(derive_seed(spec.seed, Stream::split));
  std::vector<bool> is_train(records.size(), false);

  if (spec.mode == SplitMode::pooled_random) {
    if (!(spec.ratio > 0.0 && spec.ratio < 1.0)) {
      throw ConfigError("split: ratio must lie in (0, 1)");
    }
    // The epsilon absorbs representation error such as 0.7 * 10 = 6.999...
    const auto n_train = static_cast<std::size_t>(
        std::floor(spec.ratio * static_cast<double>(records.size()) + 1e-9));
    std::vector<std::size_t> idx(records.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    shuffle(idx, rng);
    for (std::size_t i = 0; i < n_train; ++i) is_train[idx[i]] = true;
    return gather(records, std::move(is_train));
  }

  std::map<std::string, std::vector<std::size_t>> by_token;
  for (std::size_t i = 0; i < records.size(); ++i) {
    by_token[records[i].token_label].push_back(i);
  }
  for (const auto& [label, counts] : spec.fixed_counts) {
    if (!by_token.contains(label) && counts.train + counts.test > 0) {
      throw DataError("split: fixed counts for token " + label + " but no records carry it");
    }
  }
  for (auto& [label, idx] : by_token) {
    auto it = spec.fixed_counts.find(label);
    if (it == spec.fixed_counts.end()) {
      throw DataError("split: no fixed counts for token " + label);
    }
    const SplitCounts& c = it->second;
    if (c.train + c.test != idx.size()) {
      throw DataError("split: fixed counts for token " + label + " (" + std::to_string(c.train) +
                      " + " + std::to_string(c.test) + ") do not match its " +
                      std::to_string(idx.size()) + " records");
    }
    shuffle(idx, rng);
    for (std::size_t i = 0; i < c.train; ++i) is_train[idx[i]] = true;
  }
  return gather(records, std::move(is_train));
}

}  // namespace tokenlab::analytics
