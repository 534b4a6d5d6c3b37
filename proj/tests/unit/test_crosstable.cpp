#include <doctest.h>

#include <sstream>

#include "support.hpp"
#include "tokenlab/analytics/crosstable.hpp"
#include "tokenlab/error.hpp"
#include "tokenlab/harness/report.hpp"
#include "tokenlab/rng.hpp"
#include "tokenlab/tokens.hpp"

using namespace tokenlab;
using namespace tokenlab::analytics;

namespace {

CrossTable baseline() {
  const auto p = testsupport::baseline_pairs();
  return cross_table(p.actual, p.predicted, tokens::token_labels());
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

// Cell values of one rendered line, split on '|'.
std::vector<std::string> cells(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string c; std::getline(in, c, '|');) {
    const auto a = c.find_first_not_of(' ');
    const auto b = c.find_last_not_of(' ');
    out.push_back(a == std::string::npos ? "" : c.substr(a, b - a + 1));
  }
  return out;
}

}  // namespace

TEST_CASE("baseline table counts and margins") {
  const auto ct = baseline();
  CHECK(ct.total == 64);
  CHECK(ct.trace() == 57);
  CHECK(ct.row_totals == std::vector<std::uint64_t>{7, 9, 7, 10, 9, 8, 14});
  CHECK(ct.col_totals == std::vector<std::uint64_t>{11, 10, 6, 9, 9, 8, 11});
  for (std::size_t r = 0; r < 7; ++r) {
    for (std::size_t c = 0; c < 7; ++c) {
      CHECK(ct.counts[r][c] == static_cast<std::uint64_t>(testsupport::baseline_counts()[r][c]));
    }
  }
}

TEST_CASE("proportions") {
  const auto ct = baseline();
  CHECK(ct.row_proportion(2, 2) == doctest::Approx(6.0 / 7.0));
  CHECK(ct.col_proportion(2, 2) == 1.0);
  CHECK(ct.table_proportion(2, 2) == doctest::Approx(6.0 / 64.0));
  CHECK(ct.row_total_proportion(6) == doctest::Approx(14.0 / 64.0));
  CHECK(ct.col_total_proportion(0) == doctest::Approx(11.0 / 64.0));
}

TEST_CASE("empty rows and columns give zero proportions") {
  const std::vector<std::string> classes{"A", "B"};
  const std::vector<std::string> a{"A"};
  const auto ct = cross_table(a, a, classes);
  CHECK(ct.row_proportion(1, 0) == 0.0);
  CHECK(ct.col_proportion(0, 1) == 0.0);
  const auto empty = cross_table({}, {}, classes);
  CHECK(empty.total == 0);
  CHECK(empty.table_proportion(0, 0) == 0.0);
  CHECK(summarize_all(empty).success_pct == 0);
}

TEST_CASE("bad inputs") {
  const std::vector<std::string> classes{"A", "B"};
  const std::vector<std::string> one{"A"};
  const std::vector<std::string> two{"A", "B"};
  const std::vector<std::string> bad{"C"};
  CHECK_THROWS_AS((void)cross_table(one, two, classes), DataError);
  CHECK_THROWS_AS((void)cross_table(one, bad, classes), DataError);
}

TEST_CASE("success summaries on the baseline table") {
  const auto ct = baseline();
  CHECK(summarize_all(ct) == SuccessSummary{"T1:T7", 57, 7, 89});
  CHECK(summarize_leading(ct, 6) == SuccessSummary{"T1:T6", 47, 3, 94});
}

TEST_CASE("percent rounds half up") {
  CHECK(percent_half_up(57, 64) == 89);
  CHECK(percent_half_up(47, 50) == 94);
  CHECK(percent_half_up(1, 8) == 13);  // 12.5
  CHECK(percent_half_up(1, 200) == 1);  // 0.5
  CHECK(percent_half_up(1, 3) == 33);
  CHECK(percent_half_up(2, 3) == 67);
  CHECK(percent_half_up(0, 0) == 0);
  CHECK(percent_half_up(5, 5) == 100);
}

TEST_CASE("success is the trace for any table") {
  tokenlab::Rng rng(4);
  const auto classes = tokens::token_labels();
  for (int i = 0; i < 50; ++i) {
    std::vector<std::string> a;
    std::vector<std::string> p;
    for (int j = 0; j < 40; ++j) {
      a.push_back(classes[rng.below(7)]);
      p.push_back(classes[rng.below(7)]);
    }
    const auto ct = cross_table(a, p, classes);
    const auto s = summarize_all(ct);
    CHECK(s.success == ct.trace());
    CHECK(s.success + s.missed == ct.total);
    const auto g = summarize_leading(ct, 6);
    std::uint64_t rows = 0;
    for (std::size_t r = 0; r < 6; ++r) rows += ct.row_totals[r];
    CHECK(g.success + g.missed == rows);
  }
}

TEST_CASE("rendered cross table shows totals and stacked cells") {
  const auto text = harness::render_crosstable_text(baseline());
  CHECK(text.find("Total Observations in Table: 64") != std::string::npos);
  CHECK(text.find("Cell Contents") != std::string::npos);
  CHECK(text.find("N / Table Total") != std::string::npos);

  const auto ls = lines_of(text);
  auto row = std::find_if(ls.begin(), ls.end(), [](const std::string& l) {
    const auto c = cells(l);
    return !c.empty() && c[0] == "T3";
  });
  REQUIRE(row != ls.end());
  // Column 3 of the four stacked lines of row T3.
  std::vector<std::string> stack;
  for (int k = 0; k < 4; ++k) stack.push_back(cells(*(row + k)).at(3));
  CHECK(stack == std::vector<std::string>{"6", "0.857", "1.000", "0.094"});
  CHECK(cells(*row).at(8) == "7");
  CHECK(cells(*(row + 1)).at(8) == "0.109");
}

TEST_CASE("one observation renders as a single full cell") {
  const std::vector<std::string> classes{"T1"};
  const auto ct = cross_table(classes, classes, classes);
  CHECK(harness::cell_stack(ct, 0, 0) ==
        std::array<std::string, 4>{"1", "1.000", "1.000", "1.000"});
}

TEST_CASE("summary text") {
  const auto ct = baseline();
  const std::array<SuccessSummary, 2> rows{summarize_all(ct), summarize_leading(ct, 6)};
  const auto text = harness::render_success_summary(rows);
  CHECK(text.find("89%") != std::string::npos);
  CHECK(text.find("94%") != std::string::npos);
  CHECK(text.find("T1:T6") != std::string::npos);
}
