#include "tokenlab/analytics/crosstable.hpp"

#include <algorithm>

#include "tokenlab/error.hpp"

namespace tokenlab::analytics {

namespace {

double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::size_t index_of(std::span<const std::string> classes, const std::string& label) {
  auto it = std::find(classes.begin(), classes.end(), label);
  if (it == classes.end()) {
    throw DataError("cross_table: label '" + label + "' is not a known class");
  }
  return static_cast<std::size_t>(it - classes.begin());
}

}  // namespace

double CrossTable::row_proportion(std::size_t r, std::size_t c) const {
  return ratio(counts.at(r).at(c), row_totals.at(r));
}

double CrossTable::col_proportion(std::size_t r, std::size_t c) const {
  return ratio(counts.at(r).at(c), col_totals.at(c));
}

double CrossTable::table_proportion(std::size_t r, std::size_t c) const {
  return ratio(counts.at(r).at(c), total);
}

double CrossTable::row_total_proportion(std::size_t r) const { return ratio(row_totals.at(r), total); }

double CrossTable::col_total_proportion(std::size_t c) const { return ratio(col_totals.at(c), total); }

std::uint64_t CrossTable::trace() const {
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) t += counts[i][i];
  return t;
}

CrossTable cross_table(std::span<const std::string> actual, std::span<const std::string> predicted,
                       std::span<const std::string> classes) {
  if (actual.size() != predicted.size()) {
    throw DataError("cross_table: actual and predicted differ in length");
  }
  CrossTable ct;
  ct.classes.assign(classes.begin(), classes.end());
  const std::size_t n = classes.size();
  ct.counts.assign(n, std::vector<std::uint64_t>(n, 0));
  ct.row_totals.assign(n, 0);
  ct.col_totals.assign(n, 0);
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const std::size_t r = index_of(classes, actual[i]);
    const std::size_t c = index_of(classes, predicted[i]);
    ++ct.counts[r][c];
    ++ct.row_totals[r];
    ++ct.col_totals[c];
    ++ct.total;
  }
  return ct;
}

std::uint64_t percent_half_up(std::uint64_t part, std::uint64_t total) noexcept {
  if (total == 0) return 0;
  return (200 * part + total) / (2 * total);
}

SuccessSummary summarize_leading(const CrossTable& ct, std::size_t rows) {
  rows = std::min(rows, ct.size());
  SuccessSummary s;
  s.scope = rows == 0 ? std::string() : ct.classes.front() + ":" + ct.classes[rows - 1];
  for (std::size_t r = 0; r < rows; ++r) {
    s.success += ct.counts[r][r];
    s.missed += ct.row_totals[r] - ct.counts[r][r];
  }
  s.success_pct = percent_half_up(s.success, s.success + s.missed);
  return s;
}

SuccessSummary summarize_all(const CrossTable& ct) { return summarize_leading(ct, ct.size()); }

}  // namespace tokenlab::analytics
