#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace testsupport {

inline const char* default_config_path() { return TOKENLAB_DEFAULT_CONFIG; }

// Baseline 7x7 actual (rows) vs predicted (columns) counts, T1..T7.
inline const std::vector<std::vector<int>>& baseline_counts() {
  static const std::vector<std::vector<int>> m = {
      {7, 0, 0, 0, 0, 0, 0},  //
      {0, 9, 0, 0, 0, 0, 0},  //
      {0, 0, 6, 0, 0, 0, 1},  //
      {0, 0, 0, 9, 0, 1, 0},  //
      {0, 0, 0, 0, 9, 0, 0},  //
      {0, 1, 0, 0, 0, 7, 0},  //
      {4, 0, 0, 0, 0, 0, 10},
  };
  return m;
}

struct Pairs {
  std::vector<std::string> actual;
  std::vector<std::string> predicted;
};

/// Expands the count matrix into one (actual, predicted) pair per test item.
inline Pairs baseline_pairs() {
  Pairs p;
  const auto& m = baseline_counts();
  for (std::size_t r = 0; r < m.size(); ++r) {
    for (std::size_t c = 0; c < m[r].size(); ++c) {
      for (int i = 0; i < m[r][c]; ++i) {
        p.actual.push_back("T" + std::to_string(r + 1));
        p.predicted.push_back("T" + std::to_string(c + 1));
      }
    }
  }
  return p;
}

/// Brute force KNN over row-major points: every distance, a full stable sort,
/// a plain vote count. Ties: smaller mean distance of the voters, then lower class.
inline std::vector<std::size_t> oracle_knn(const std::vector<std::vector<double>>& train,
                                           const std::vector<std::size_t>& labels,
                                           const std::vector<std::vector<double>>& test,
                                           std::size_t k, std::size_t classes) {
  std::vector<std::size_t> out;
  for (const auto& q : test) {
    std::vector<std::pair<double, std::size_t>> d;
    for (std::size_t i = 0; i < train.size(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < q.size(); ++j) {
        const double diff = train[i][j] - q[j];
        s += diff * diff;
      }
      d.emplace_back(s, i);
    }
    std::stable_sort(d.begin(), d.end());
    std::vector<std::size_t> votes(classes, 0);
    std::vector<double> sum(classes, 0.0);
    for (std::size_t r = 0; r < k; ++r) {
      votes[labels[d[r].second]] += 1;
      sum[labels[d[r].second]] += std::sqrt(d[r].first);
    }
    const std::size_t top = *std::max_element(votes.begin(), votes.end());
    std::size_t best = classes;
    double best_mean = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
      if (votes[c] != top) continue;
      const double mean = sum[c] / static_cast<double>(votes[c]);
      if (best == classes || mean < best_mean) {
        best = c;
        best_mean = mean;
      }
    }
    out.push_back(best);
  }
  return out;
}

/// Upper tail of chi-square with an even number of degrees of freedom:
/// exp(-x/2) * sum_{j < df/2} (x/2)^j / j!
inline double chi2_survival_even(double x, int df) {
  const double h = x / 2.0;
  double term = 1.0;
  double sum = 1.0;
  for (int j = 1; j < df / 2; ++j) {
    term *= h / j;
    sum += term;
  }
  return std::exp(-h) * sum;
}

/// Kruskal-Wallis H with average ranks for ties (no tie correction).
inline double kruskal_wallis(const std::vector<std::vector<double>>& groups) {
  std::vector<std::pair<double, std::size_t>> all;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (double x : groups[g]) all.emplace_back(x, g);
  }
  std::sort(all.begin(), all.end());
  const double n = static_cast<double>(all.size());
  std::vector<double> rank_sum(groups.size(), 0.0);
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].first == all[i].first) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t) rank_sum[all[t].second] += avg;
    i = j;
  }
  double h = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    h += rank_sum[g] * rank_sum[g] / static_cast<double>(groups[g].size());
  }
  return 12.0 / (n * (n + 1.0)) * h - 3.0 * (n + 1.0);
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("tokenlab-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  [[nodiscard]] const std::filesystem::path& path() const { return path_; }
  [[nodiscard]] std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

}  // namespace testsupport
