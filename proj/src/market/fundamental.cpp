#include "tokenlab/market/fundamental.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tokenlab/rng.hpp"

namespace tokenlab::market {

double FundamentalPath::terminal_return() const {
  if (values.size() < 2 || values.front() <= 0) {
    return 0.0;
  }
  return static_cast<double>(values.back()) / static_cast<double>(values.front()) - 1.0;
}

FundamentalPath generate_fundamental(std::uint64_t seed, const FundamentalParams& params) {
  if (params.steps < 2) {
    throw std::invalid_argument("generate_fundamental: steps must be >= 2");
  }
  if (params.start_price <= 0 || params.tick_size <= 0) {
    throw std::invalid_argument("generate_fundamental: start price and tick size must be positive");
  }
  if (!(params.volatility >= 0.0) || !std::isfinite(params.volatility)) {
    throw std::invalid_argument("generate_fundamental: volatility must be finite and >= 0");
  }
  const double drift = params.drift_target;
  if (!std::isfinite(drift) || drift <= -1.0) {
    throw std::invalid_argument("generate_fundamental: drift target must be finite and > -1");
  }
  if (!params.allow_drift_override && (drift < kMinDriftTarget || drift > kMaxDriftTarget)) {
    throw std::invalid_argument("generate_fundamental: drift target " + std::to_string(drift) +
                                " outside [0.02, 0.05] (set allow_drift_override for what-if runs)");
  }

  const auto n = static_cast<std::size_t>(params.steps);
  Rng rng(seed);
  std::vector<double> walk(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    walk[i] = walk[i - 1] + params.volatility * rng.normal();
  }

  const double last = static_cast<double>(n - 1);
  const double log_growth = std::log1p(drift);
  const double start = static_cast<double>(params.start_price);
  const double tick = static_cast<double>(params.tick_size);

  FundamentalPath path;
  path.drift_target = drift;
  path.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double frac = static_cast<double>(i) / last;
    const double bridge = walk[i] - frac * walk[n - 1];
    const double price = start * std::exp(frac * log_growth + bridge);
    auto ticks = static_cast<Ticks>(std::llround(price / tick)) * params.tick_size;
    path.values[i] = ticks < params.tick_size ? params.tick_size : ticks;
  }
  return path;
}

}  // namespace tokenlab::market
