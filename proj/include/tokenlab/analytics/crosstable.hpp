#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tokenlab::analytics {

/// Actual-vs-predicted contingency table (rows = actual, columns = predicted).
///
/// Proportions with a zero denominator (an empty row or column) are 0.
struct CrossTable {
  std::vector<std::string> classes;
  std::vector<std::vector<std::uint64_t>> counts;
  std::vector<std::uint64_t> row_totals;
  std::vector<std::uint64_t> col_totals;
  std::uint64_t total = 0;

  [[nodiscard]] std::size_t size() const noexcept { return classes.size(); }
  [[nodiscard]] double row_proportion(std::size_t r, std::size_t c) const;
  [[nodiscard]] double col_proportion(std::size_t r, std::size_t c) const;
  [[nodiscard]] double table_proportion(std::size_t r, std::size_t c) const;
  [[nodiscard]] double row_total_proportion(std::size_t r) const;
  [[nodiscard]] double col_total_proportion(std::size_t c) const;
  [[nodiscard]] std::uint64_t trace() const;

  friend bool operator==(const CrossTable&, const CrossTable&) = default;
};

/// Throws DataError on unequal lengths or a label outside `classes`.
[[nodiscard]] CrossTable cross_table(std::span<const std::string> actual,
                                     std::span<const std::string> predicted,
                                     std::span<const std::string> classes);

struct SuccessSummary {
  std::string scope;  // e.g. "T1:T7" or "T1:T6"
  std::uint64_t success = 0;
  std::uint64_t missed = 0;
  /// round(100 * success / (success + missed)), halves rounded up.
  std::uint64_t success_pct = 0;

  friend bool operator==(const SuccessSummary&, const SuccessSummary&) = default;
};

/// Integer percent, rounded half up. Zero when total is zero.
[[nodiscard]] std::uint64_t percent_half_up(std::uint64_t part, std::uint64_t total) noexcept;

/// Over all rows: success = diagonal, missed = everything else.
[[nodiscard]] SuccessSummary summarize_all(const CrossTable& ct);

/// Over the first `rows` actual classes only; a prediction outside the
/// row's own class (including into classes past `rows`) counts as missed.
[[nodiscard]] SuccessSummary summarize_leading(const CrossTable& ct, std::size_t rows);

}  // namespace tokenlab::analytics
