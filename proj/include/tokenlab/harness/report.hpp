#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tokenlab/analytics/crosstable.hpp"
#include "tokenlab/analytics/record.hpp"
#include "tokenlab/analytics/split.hpp"
#include "tokenlab/analytics/stats.hpp"

namespace tokenlab::harness {

/// The four stacked values of one cell: count, then row, column and table
/// proportions at three decimals.
[[nodiscard]] std::array<std::string, 4> cell_stack(const analytics::CrossTable& ct, std::size_t row,
                                                    std::size_t col);

/// Contingency-table text: a cell-contents legend, the observation count,
/// then per actual class four stacked lines (count, N / Row Total,
/// N / Col Total, N / Table Total) with row totals and their share, and a
/// closing column-total block.
[[nodiscard]] std::string render_crosstable_text(const analytics::CrossTable& ct,
                                                 const std::string& row_name = "actual",
                                                 const std::string& col_name = "predicted");

[[nodiscard]] std::string render_success_summary(std::span<const analytics::SuccessSummary> rows);

/// Money is in ticks x shares; 100 ticks are one dollar at the default tick.
[[nodiscard]] std::string render_cohort_stats(const analytics::CohortStats& stats);

/// Per-token record, train and test counts with a total row.
[[nodiscard]] std::string render_data_organization(const analytics::Partition& partition);

}  // namespace tokenlab::harness
