#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "tokenlab/market/fundamental.hpp"
#include "tokenlab/rng.hpp"

using namespace tokenlab::market;

TEST_CASE("the path is pinned at both ends") {
  FundamentalParams p;
  const auto path = generate_fundamental(11, p);
  REQUIRE(path.values.size() == 390);
  CHECK(path.values.front() == 10000);
  CHECK(path.values.back() == 10300);
  CHECK(path.drift_target == 0.03);
  CHECK(path.terminal_return() == doctest::Approx(0.03));
}

TEST_CASE("terminal return stays within tolerance across targets and seeds") {
  tokenlab::Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    FundamentalParams p;
    p.drift_target = kMinDriftTarget + (kMaxDriftTarget - kMinDriftTarget) * rng.uniform();
    p.start_price = rng.uniform_int(500, 50000);
    const auto path = generate_fundamental(rng.next(), p);
    CHECK(std::abs(path.terminal_return() - p.drift_target) <= kDriftTolerance);
    for (auto v : path.values) REQUIRE(v > 0);
  }
}

TEST_CASE("values sit on the tick grid") {
  FundamentalParams p;
  p.tick_size = 5;
  p.volatility = 0.002;
  const auto path = generate_fundamental(3, p);
  for (auto v : path.values) CHECK(v % 5 == 0);
}

TEST_CASE("zero volatility gives a smooth geometric path") {
  FundamentalParams p;
  p.volatility = 0.0;
  const auto a = generate_fundamental(1, p);
  const auto b = generate_fundamental(2, p);
  CHECK(a == b);
  for (std::size_t i = 1; i < a.values.size(); ++i) CHECK(a.values[i] >= a.values[i - 1]);
}

TEST_CASE("same seed same path, different seed different path") {
  FundamentalParams p;
  CHECK(generate_fundamental(8, p) == generate_fundamental(8, p));
  CHECK(generate_fundamental(8, p).values != generate_fundamental(9, p).values);
}

TEST_CASE("invalid parameters throw") {
  FundamentalParams p;
  p.drift_target = 0.08;
  CHECK_THROWS_AS((void)generate_fundamental(1, p), std::invalid_argument);
  p.allow_drift_override = true;
  CHECK(generate_fundamental(1, p).terminal_return() == doctest::Approx(0.08).epsilon(0.01));
  FundamentalParams q;
  q.steps = 1;
  CHECK_THROWS_AS((void)generate_fundamental(1, q), std::invalid_argument);
  q = {};
  q.start_price = 0;
  CHECK_THROWS_AS((void)generate_fundamental(1, q), std::invalid_argument);
  q = {};
  q.volatility = -1.0;
  CHECK_THROWS_AS((void)generate_fundamental(1, q), std::invalid_argument);
}
