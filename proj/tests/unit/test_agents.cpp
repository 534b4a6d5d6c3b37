#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "support.hpp"
#include "tokenlab/agents.hpp"
#include "tokenlab/error.hpp"
#include "tokenlab/harness/config.hpp"

using namespace tokenlab;
using namespace tokenlab::agents;

namespace {

struct Fixture {
  harness::ExperimentConfig cfg = harness::load_config(testsupport::default_config_path());
  std::vector<tokens::InformationToken> tokens =
      tokens::build_token_set(cfg.virtue, cfg.templates);
};

market::MarketView view_at(int step) {
  market::MarketView v;
  v.step = step;
  v.steps = 390;
  return v;
}

}  // namespace

TEST_CASE("table mapping follows the documented formulas") {
  Fixture f;
  const auto& m = f.cfg.behavior;
  for (const auto& t : f.tokens) {
    const auto p = map_behavior(t, m);
    const auto& e = t.encoding;
    const double signal = (e.determinism + e.stated_probability) / 2.0;
    CHECK(p.intensity ==
          doctest::Approx(m.intensity_min + (m.intensity_max - m.intensity_min) * signal));
    const double items = std::max(0.0, e.item_count - 1.0);
    CHECK(p.reaction_delay == m.delay_min + static_cast<int>(std::lround(m.delay_per_item * items)));
    CHECK(p.size_factor == doctest::Approx(m.size_min + (m.size_max - m.size_min) * e.specificity));
    CHECK(p.direction_confidence ==
          doctest::Approx(t.is_control() ? 0.0 : 2.0 * e.stated_probability - 1.0));
  }
}

TEST_CASE("separation 0 makes every token draw the same profile") {
  Fixture f;
  auto m = f.cfg.behavior;
  m.separation = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng r0(seed);
    const auto ref = derive_behavior(f.tokens[0], m.base, m, r0);
    for (const auto& t : f.tokens) {
      Rng r(seed);
      CHECK(derive_behavior(t, m.base, m, r) == ref);
    }
  }
}

TEST_CASE("separation 1 without jitter reproduces the table") {
  Fixture f;
  auto m = f.cfg.behavior;
  m.intensity_jitter = m.delay_jitter = m.size_jitter = m.confidence_jitter = 0.0;
  Rng r(1);
  for (const auto& t : f.tokens) {
    const auto p = derive_behavior(t, m.base, m, r);
    const auto q = map_behavior(t, m);
    CHECK(p.intensity == doctest::Approx(q.intensity));
    CHECK(p.reaction_delay == q.reaction_delay);
    CHECK(p.size_factor == doctest::Approx(q.size_factor));
    CHECK(p.direction_confidence == doctest::Approx(q.direction_confidence));
  }
}

TEST_CASE("clamp keeps profiles in range") {
  BehaviorProfile p{1.4, 999, -2.0, -0.5, 3.0};
  const auto c = clamp_profile(p, 390);
  CHECK(c.intensity == 1.0);
  CHECK(c.reaction_delay == 389);
  CHECK(c.size_factor == 0.0);
  CHECK(c.noise_sd == 0.0);
  CHECK(c.direction_confidence == 1.0);
}

TEST_CASE("no orders before the reaction delay") {
  BehaviorProfile p{1.0, 10, 3.0, 0.0, 1.0};
  AgentState s;
  Rng r(1);
  for (int step = 0; step < 10; ++step) CHECK_FALSE(agent_step(view_at(step), p, s, r));
  CHECK(agent_step(view_at(10), p, s, r));
}

TEST_CASE("buy share tracks the direction confidence") {
  for (double c : {-1.0, -0.5, 0.0, 0.4, 1.0}) {
    BehaviorProfile p{1.0, 0, 3.0, 0.1, c};
    AgentState s;
    Rng r(2);
    int buys = 0;
    const int n = 1000;
    for (int i = 0; i < n; ++i) {
      const auto t = agent_step(view_at(i), p, s, r);
      REQUIRE(t);
      CHECK(t->kind == market::OrderKind::market);
      CHECK(t->quantity >= 1);
      buys += t->side == market::Side::buy;
    }
    CHECK(std::abs(buys - n * (1.0 + c) / 2.0) <= 1.0);
    CHECK(s.orders == static_cast<std::uint64_t>(n));
  }
}

TEST_CASE("intensity sets the order rate") {
  BehaviorProfile p{0.3, 0, 3.0, 0.1, 1.0};
  AgentState s;
  Rng r(3);
  int n = 0;
  for (int i = 0; i < 20000; ++i) n += agent_step(view_at(i), p, s, r).has_value();
  CHECK(n / 20000.0 == doctest::Approx(0.3).epsilon(0.05));
}

TEST_CASE("cohort output is independent of the worker count") {
  Fixture f;
  CohortSpec spec{"T3", 9, 1234, 40, 40};
  const auto& token = f.tokens[2];
  const auto one = run_cohort(spec, token, f.cfg.market, f.cfg.behavior, 1);
  const auto four = run_cohort(spec, token, f.cfg.market, f.cfg.behavior, 4);
  CHECK(one == four);
  REQUIRE(one.size() == 9);
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].record_id == 40 + i);
    CHECK(one[i].subject_id == 40 + i);
    CHECK(one[i].token_label == "T3");
    CHECK(one[i].seed == subject_seed(1234, i));
  }
}

TEST_CASE("a subject's profit equals the scripted replay of its own orders") {
  Fixture f;
  const auto run = run_subject(f.tokens[0], f.cfg.market, f.cfg.behavior, 99);
  market::ScriptedController replay(run.session.subject_schedule());
  const auto again = market::run_session(f.cfg.market, replay, 99);
  CHECK(again.subject_net_profit == run.session.subject_net_profit);
  CHECK(again.trades == run.session.trades);
}

TEST_CASE("guided tokens beat control on average") {
  Fixture f;
  CohortSpec t1{"T1", 6, 5, 1, 1};
  CohortSpec t7{"T7", 6, 5, 1, 1};
  double s1 = 0;
  double s7 = 0;
  for (const auto& r : run_cohort(t1, f.tokens[0], f.cfg.market, f.cfg.behavior)) s1 += r.net_profit;
  for (const auto& r : run_cohort(t7, f.tokens[6], f.cfg.market, f.cfg.behavior)) s7 += r.net_profit;
  CHECK(s1 > s7);
}

TEST_CASE("empty cohorts and mismatched tokens are rejected") {
  Fixture f;
  CHECK_THROWS_AS((void)run_cohort({"T1", 0, 1, 1, 1}, f.tokens[0], f.cfg.market, f.cfg.behavior),
                  ConfigError);
  CHECK_THROWS_AS((void)run_cohort({"T2", 3, 1, 1, 1}, f.tokens[0], f.cfg.market, f.cfg.behavior),
                  ConfigError);
}
