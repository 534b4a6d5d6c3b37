// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "support.hpp"
#include "tokenlab/analytics/crosstable.hpp"
#include "tokenlab/analytics/features.hpp"
#include "tokenlab/analytics/knn.hpp"
#include "tokenlab/harness/experiment.hpp"
#include "tokenlab/harness/report.hpp"
#include "tokenlab/market/fundamental.hpp"
#include "tokenlab/market/session.hpp"

using namespace tokenlab;
using tokenlab::market::Money;
using tokenlab::market::Shares;

namespace {

// Tolerances and budgets.
constexpr std::size_t kKnnInstances = 1000;
constexpr std::size_t kAffineDatasets = 100;
constexpr int kSeparabilitySeeds = 20;
constexpr double kSeparabilityFloor = 0.80;
constexpr int kChanceSeeds = 50;
constexpr double kChanceHalfWidth = 0.15;
constexpr std::size_t kConservationOrders = 100000;
constexpr std::size_t kFundamentalPaths = 1000;

struct Outcome {
  bool pass = false;
  std::string detail;
};

unsigned jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

harness::ExperimentConfig default_config() {
  return harness::load_config(testsupport::default_config_path());
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Outcome summary_arithmetic() {
  const auto p = testsupport::baseline_pairs();
  const auto ct = analytics::cross_table(p.actual, p.predicted, tokens::token_labels());
  const auto all = analytics::summarize_all(ct);
  const auto guided = analytics::summarize_leading(ct, 6);
  const bool ok = all == analytics::SuccessSummary{"T1:T7", 57, 7, 89} &&
                  guided == analytics::SuccessSummary{"T1:T6", 47, 3, 94};
  return {ok, std::to_string(all.success) + "/" + std::to_string(all.missed) + "/" +
                  std::to_string(all.success_pct) + "% and " + std::to_string(guided.success) +
                  "/" + std::to_string(guided.missed) + "/" + std::to_string(guided.success_pct) +
                  "%"};
}

Outcome rendered_fragments() {
  const auto p = testsupport::baseline_pairs();
  const auto ct = analytics::cross_table(p.actual, p.predicted, tokens::token_labels());
  const auto text = harness::render_crosstable_text(ct);
  const bool total = text.find("Total Observations in Table: 64") != std::string::npos;
  // The T3 row's stacked cell in the T3 column, one value per line.
  std::vector<std::string> lines;
  for (std::size_t a = 0, b; a < text.size(); a = b + 1) {
    b = text.find('\n', a);
    if (b == std::string::npos) b = text.size();
    lines.push_back(text.substr(a, b - a));
  }
  auto field = [](const std::string& line, std::size_t col) {
    std::size_t start = 0;
    for (std::size_t i = 0; i < col; ++i) {
      start = line.find('|', start);
      if (start == std::string::npos) return std::string();
      ++start;
    }
    const auto end = line.find('|', start);
    std::string f = line.substr(start, end - start);
    f.erase(0, f.find_first_not_of(' '));
    f.erase(f.find_last_not_of(' ') + 1);
    return f;
  };
  bool cell = false;
  for (std::size_t i = 0; i + 3 < lines.size(); ++i) {
    if (field(lines[i], 0) != "T3") continue;
    cell = field(lines[i], 3) == "6" && field(lines[i + 1], 3) == "0.857" &&
           field(lines[i + 2], 3) == "1.000" && field(lines[i + 3], 3) == "0.094";
  }
  return {total && cell, std::string("total line ") + (total ? "found" : "missing") +
                             ", T3 cell " + (cell ? "6/0.857/1.000/0.094" : "mismatch")};
}

Outcome knn_oracle() {
  Rng rng(derive_seed(1, Stream::scratch, 1));
  std::size_t agree = 0;
  for (std::size_t inst = 0; inst < kKnnInstances; ++inst) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(5, 50));
    const auto dims = static_cast<std::size_t>(rng.uniform_int(1, 3));
    const std::size_t k = 1 + 2 * rng.below(3);
    const std::size_t classes = 7;
    const bool grid = inst % 4 == 0;
    auto point = [&] {
      std::vector<double> p(dims);
      for (auto& x : p) x = grid ? static_cast<double>(rng.uniform_int(0, 4)) : rng.normal();
      return p;
    };
    std::vector<std::vector<double>> train(n);
    std::vector<std::size_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      train[i] = point();
      labels[i] = rng.below(classes);
    }
    std::vector<std::vector<double>> test(8);
    for (auto& q : test) q = point();
    const auto got = analytics::knn_classify(analytics::FeatureMatrix::from_rows(train), labels,
                                             analytics::FeatureMatrix::from_rows(test), {k},
                                             classes);
    if (got == testsupport::oracle_knn(train, labels, test, k, classes)) ++agree;
  }
  return {agree == kKnnInstances,
          std::to_string(agree) + "/" + std::to_string(kKnnInstances) + " instances agree"};
}

Outcome affine_invariance() {
  Rng rng(derive_seed(1, Stream::scratch, 2));
  auto cfg = default_config();
  cfg.split.mode = analytics::SplitMode::pooled_random;
  std::size_t same = 0;
  for (std::size_t d = 0; d < kAffineDatasets; ++d) {
    std::vector<analytics::PerformanceRecord> rs;
    const auto n = static_cast<std::size_t>(rng.uniform_int(40, 200));
    for (std::size_t i = 0; i < n; ++i) {
      analytics::PerformanceRecord r;
      r.record_id = i + 1;
      r.subject_id = i + 1;
      const auto label = rng.below(7);
      r.token_label = tokens::token_label(label);
      r.net_profit = rng.normal(200.0 * static_cast<double>(label), 300.0);
      rs.push_back(r);
    }
    const double a = std::exp(rng.uniform() * 6.0 - 3.0);
    const double b = (rng.uniform() - 0.5) * 2e4;
    auto moved = rs;
    for (auto& r : moved) r.net_profit = a * r.net_profit + b;
    cfg.split.seed = d;
    cfg.knn.k = 1 + 2 * rng.below(3);
    if (harness::classify(rs, cfg).predicted == harness::classify(moved, cfg).predicted) ++same;
  }
  return {same == kAffineDatasets,
          std::to_string(same) + "/" + std::to_string(kAffineDatasets) + " datasets identical"};
}

double mean_accuracy(harness::ExperimentConfig cfg, int seeds, double* lowest) {
  double sum = 0.0;
  double low = 1.0;
  for (int s = 0; s < seeds; ++s) {
    cfg.master_seed = static_cast<std::uint64_t>(s) + 1;
    cfg.split.seed = cfg.master_seed;
    const auto rs = harness::generate_records(cfg, jobs());
    const double acc = harness::classify(rs, cfg).accuracy;
    sum += acc;
    low = std::min(low, acc);
  }
  if (lowest != nullptr) *lowest = low;
  return sum / seeds;
}

Outcome separability() {
  auto cfg = default_config();
  double low = 0.0;
  const double mean = mean_accuracy(cfg, kSeparabilitySeeds, &low);
  cfg.behavior.separation = 0.0;
  const double chance = mean_accuracy(cfg, kChanceSeeds, nullptr);
  const double center = 1.0 / 7.0;
  const bool ok = mean >= kSeparabilityFloor && std::abs(chance - center) <= kChanceHalfWidth;
  return {ok, "mean accuracy " + fmt("%.3f", mean) + " over " +
                  std::to_string(kSeparabilitySeeds) + " seeds (min " + fmt("%.3f", low) +
                  "), separation 0 gives " + fmt("%.3f", chance) + " over " +
                  std::to_string(kChanceSeeds) + " seeds"};
}

Outcome cohort_shape() {
  const auto cfg = default_config();
  const auto rs = harness::generate_records(cfg, jobs());
  std::vector<std::size_t> counts(7, 0);
  for (const auto& r : rs) ++counts[*tokens::token_index(r.token_label)];
  const auto part = analytics::split(rs, cfg.split);
  std::size_t t7_train = 0;
  std::size_t t7_test = 0;
  for (const auto& r : part.train) t7_train += r.token_label == "T7";
  for (const auto& r : part.test) t7_test += r.token_label == "T7";
  const bool ok = rs.size() == 223 &&
                  counts == std::vector<std::size_t>{30, 35, 31, 30, 30, 34, 33} &&
                  part.train.size() == 159 && part.test.size() == 64 && t7_train == 19 &&
                  t7_test == 14;
  std::string c;
  for (auto n : counts) c += (c.empty() ? "" : ",") + std::to_string(n);
  return {ok, std::to_string(rs.size()) + " records (" + c + "), train " +
                  std::to_string(part.train.size()) + " / test " +
                  std::to_string(part.test.size()) + ", T7 " + std::to_string(t7_train) + "/" +
                  std::to_string(t7_test)};
}

// Random subject mixing market and limit orders around the current quotes.
class RandomTrader final : public market::Controller {
 public:
  explicit RandomTrader(std::uint64_t seed) : rng_(seed) {}
  void decide(const market::MarketView& v, std::vector<market::OrderTicket>& out) override {
    const auto n = rng_.below(4);
    for (std::uint64_t i = 0; i < n; ++i) {
      market::OrderTicket t;
      t.side = rng_.bernoulli(0.5) ? market::Side::buy : market::Side::sell;
      t.quantity = rng_.uniform_int(1, 40);
      const auto ref = v.last_trade.value_or(10000);
      if (rng_.bernoulli(0.5)) {
        t.kind = market::OrderKind::limit;
        t.price = ref + rng_.uniform_int(-6, 6);
      }
      out.push_back(t);
    }
  }

 private:
  Rng rng_;
};

Outcome conservation() {
  auto cfg = default_config().market;
  cfg.flow.arrival_rate = 40.0;
  cfg.flow.market_fraction = 0.3;
  std::size_t orders = 0;
  std::size_t trades = 0;
  bool conserved = true;
  bool uncrossed = true;
  bool replayed = true;
  for (std::uint64_t s = 0; orders < kConservationOrders; ++s) {
    market::MarketSession session(cfg, derive_seed(2, Stream::scratch, s));
    RandomTrader trader(derive_seed(3, Stream::scratch, s));
    std::vector<market::OrderTicket> tickets;
    while (!session.finished()) {
      tickets.clear();
      trader.decide(session.view(), tickets);
      (void)session.advance(tickets);
      const auto bid = session.book().best_bid();
      const auto ask = session.book().best_ask();
      if (bid && ask && *bid >= *ask) uncrossed = false;
      if (!session.book().sane()) uncrossed = false;
    }
    const auto result = session.result();
    for (const auto& o : result.orders) orders += o.action == market::LogAction::submit;
    trades += result.trades.size();

    // Apply trades one at a time; totals must stay at their opening values
    // and each trade must move exactly price x quantity between the two sides.
    market::AccountBook book;
    Money cash0 = 0;
    Shares inv0 = 0;
    for (const auto& [id, a] : result.openings) {
      book.open(id, a.cash, a.inventory);
      cash0 += a.cash;
      inv0 += a.inventory;
    }
    for (const auto& t : result.trades) {
      const auto buyer_before = book.contains(t.buyer) ? book.at(t.buyer) : market::ParticipantAccount{};
      const auto seller_before =
          book.contains(t.seller) ? book.at(t.seller) : market::ParticipantAccount{};
      book.apply(t);
      const Money value = t.price * t.quantity;
      if (book.at(t.buyer).cash != buyer_before.cash - value ||
          book.at(t.seller).cash != seller_before.cash + value ||
          book.at(t.buyer).inventory != buyer_before.inventory + t.quantity ||
          book.at(t.seller).inventory != seller_before.inventory - t.quantity) {
        conserved = false;
      }
    }
    Money cash = 0;
    Shares inv = 0;
    for (const auto& [id, a] : book.all()) {
      cash += a.cash;
      inv += a.inventory;
    }
    if (cash != cash0 || inv != inv0 || book.all() != result.accounts) conserved = false;

    const auto again = market::replay(result, cfg.tick_size);
    if (again.trades != result.trades || again.accounts != result.accounts) replayed = false;
  }
  return {conserved && uncrossed && replayed,
          std::to_string(orders) + " orders, " + std::to_string(trades) + " trades; conserved " +
              (conserved ? "yes" : "no") + ", never crossed " + (uncrossed ? "yes" : "no") +
              ", replay exact " + (replayed ? "yes" : "no")};
}

Outcome determinism() {
  testsupport::TempDir dir("accept");
  auto cfg = default_config();
  cfg.output_dir = dir.path().string();
  auto snapshot = [&](unsigned j) {
    const auto bundle = harness::run_experiment(cfg, {false, j});
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& f : bundle.files) out.emplace_back(f.filename().string(), testsupport::slurp(f));
    return out;
  };
  const auto first = snapshot(1);
  const auto second = snapshot(jobs());
  return {first == second && !first.empty(),
          std::to_string(first.size()) + " files compared, " +
              (first == second ? "byte-identical" : "different")};
}

Outcome virtue_bound() {
  Rng rng(derive_seed(4, Stream::scratch));
  double worst = 0.0;
  bool in_range = true;
  for (std::size_t i = 0; i < kFundamentalPaths; ++i) {
    market::FundamentalParams p;
    p.drift_target = market::kMinDriftTarget +
                     (market::kMaxDriftTarget - market::kMinDriftTarget) * rng.uniform();
    p.volatility = 0.0002 + 0.002 * rng.uniform();
    p.steps = static_cast<int>(rng.uniform_int(2, 1000));
    const auto path = market::generate_fundamental(rng.next(), p);
    in_range = in_range && path.drift_target >= 0.02 && path.drift_target <= 0.05;
    worst = std::max(worst, std::abs(path.terminal_return() - path.drift_target));
  }
  return {in_range && worst <= 0.005,
          std::to_string(kFundamentalPaths) + " paths, worst |return - target| " +
              fmt("%.6f", worst)};
}

struct Criterion {
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"success-summary-arithmetic", 1, summary_arithmetic},
      {"crosstable-rendering", 1, rendered_fragments},
      {"knn-oracle-equivalence", 10, knn_oracle},
      {"pipeline-affine-invariance", 5, affine_invariance},
      {"default-separability", 120, separability},
      {"cohort-and-split-shape", 30, cohort_shape},
      {"market-conservation", 30, conservation},
      {"determinism", 60, determinism},
      {"virtue-bound", 5, virtue_bound},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("%s %s: %s [%.2fs of %.0fs]\n", pass ? "PASS" : "FAIL", c.name, o.detail.c_str(),
                secs, c.budget_s);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
