#include "tokenlab/harness/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace tokenlab::harness {

namespace {

std::string fixed3(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::array<std::string, 4> cell_stack(const analytics::CrossTable& ct, std::size_t row,
                                      std::size_t col) {
  return {std::to_string(ct.counts.at(row).at(col)), fixed3(ct.row_proportion(row, col)),
          fixed3(ct.col_proportion(row, col)), fixed3(ct.table_proportion(row, col))};
}

std::string render_crosstable_text(const analytics::CrossTable& ct, const std::string& row_name,
                                   const std::string& col_name) {
  const std::size_t n = ct.size();
  std::size_t label_w = std::max<std::size_t>(row_name.size(), 12);  // "Column Total"
  for (const auto& c : ct.classes) label_w = std::max(label_w, c.size());
  std::size_t cell_w = 9;
  for (const auto& c : ct.classes) cell_w = std::max(cell_w, c.size());
  cell_w = std::max(cell_w, std::to_string(ct.total).size());

  auto cell = [&](const std::string& s) { return " " + pad_left(s, cell_w) + " |"; };
  const std::string blank_cell = cell("");
  auto rule = [&](std::size_t cells) {
    std::string s(label_w, '-');
    s += '|';
    for (std::size_t i = 0; i < cells; ++i) s += std::string(cell_w + 2, '-') + '|';
    return s + '\n';
  };

  std::ostringstream out;
  out << "\n   Cell Contents\n"
      << "|-------------------------|\n"
      << "|                       N |\n"
      << "|           N / Row Total |\n"
      << "|           N / Col Total |\n"
      << "|         N / Table Total |\n"
      << "|-------------------------|\n\n"
      << "Total Observations in Table: " << ct.total << "\n\n";

  out << pad_left("", label_w) << "| " << col_name << '\n';
  out << pad_left(row_name, label_w) << '|';
  for (const auto& c : ct.classes) out << cell(c);
  out << cell("Row Total") << '\n';
  out << rule(n + 1);

  for (std::size_t r = 0; r < n; ++r) {
    std::array<std::string, 4> lines;
    lines[0] = pad_left(ct.classes[r], label_w) + '|';
    for (std::size_t k = 1; k < 4; ++k) lines[k] = pad_left("", label_w) + '|';
    for (std::size_t c = 0; c < n; ++c) {
      const auto stack = cell_stack(ct, r, c);
      for (std::size_t k = 0; k < 4; ++k) lines[k] += cell(stack[k]);
    }
    lines[0] += cell(std::to_string(ct.row_totals[r]));
    lines[1] += cell(fixed3(ct.row_total_proportion(r)));
    lines[2] += blank_cell;
    lines[3] += blank_cell;
    for (const auto& l : lines) out << l << '\n';
    out << rule(n + 1);
  }

  out << pad_left("Column Total", label_w) << '|';
  for (std::size_t c = 0; c < n; ++c) out << cell(std::to_string(ct.col_totals[c]));
  out << cell(std::to_string(ct.total)) << '\n';
  out << pad_left("", label_w) << '|';
  for (std::size_t c = 0; c < n; ++c) out << cell(fixed3(ct.col_total_proportion(c)));
  out << blank_cell << '\n';
  out << rule(n + 1);
  return out.str();
}

std::string render_success_summary(std::span<const analytics::SuccessSummary> rows) {
  std::ostringstream out;
  out << "Summary of KNN Classification Success\n\n";
  out << pad_right("Scope", 8) << pad_left("Success", 9) << pad_left("Missed", 9)
      << pad_left("Success%", 10) << '\n';
  for (const auto& s : rows) {
    out << pad_right(s.scope, 8) << pad_left(std::to_string(s.success), 9)
        << pad_left(std::to_string(s.missed), 9)
        << pad_left(std::to_string(s.success_pct) + "%", 10) << '\n';
  }
  return out.str();
}

std::string render_cohort_stats(const analytics::CohortStats& stats) {
  std::ostringstream out;
  char buf[160];
  out << "Net profit by token (currency units = ticks x shares; $ at 100 ticks per dollar)\n\n";
  std::snprintf(buf, sizeof buf, "%-6s %6s %14s %14s %12s\n", "Token", "Count", "Mean", "SD",
                "Mean $");
  out << buf;
  for (const auto& [label, s] : stats.by_token) {
    const std::string sd = s.sd ? [&] {
      char b[32];
      std::snprintf(b, sizeof b, "%.2f", *s.sd);
      return std::string(b);
    }()
                                : std::string("n/a");
    std::snprintf(buf, sizeof buf, "%-6s %6zu %14.2f %14s %12.2f\n", label.c_str(), s.count,
                  s.mean, sd.c_str(), s.mean / 100.0);
    out << buf;
  }
  return out.str();
}

std::string render_data_organization(const analytics::Partition& partition) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;
  for (const auto& r : partition.train) ++counts[r.token_label].first;
  for (const auto& r : partition.test) ++counts[r.token_label].second;
  std::ostringstream out;
  char buf[96];
  out << "Data organization\n\n";
  std::snprintf(buf, sizeof buf, "%-6s %8s %8s %8s\n", "Token", "Count", "Train", "Test");
  out << buf;
  std::size_t train = 0;
  std::size_t test = 0;
  for (const auto& [label, c] : counts) {
    std::snprintf(buf, sizeof buf, "%-6s %8zu %8zu %8zu\n", label.c_str(), c.first + c.second,
                  c.first, c.second);
    out << buf;
    train += c.first;
    test += c.second;
  }
  std::snprintf(buf, sizeof buf, "%-6s %8zu %8zu %8zu\n", "Total", train + test, train, test);
  out << buf;
  return out.str();
}

}  // namespace tokenlab::harness
