#include "tokenlab/market/flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tokenlab/rng.hpp"

namespace tokenlab::market {

namespace {

void check(const FlowParams& p) {
  if (!std::isfinite(p.arrival_rate) || p.arrival_rate < 0.0) {
    throw std::invalid_argument("background flow: arrival rate must be finite and >= 0");
  }
  if (p.market_fraction < 0.0 || p.market_fraction > 1.0) {
    throw std::invalid_argument("background flow: market fraction must lie in [0, 1]");
  }
  if (p.min_size <= 0 || p.max_size < p.min_size) {
    throw std::invalid_argument("background flow: need 0 < min_size <= max_size");
  }
  if (p.traders < 2) {
    throw std::invalid_argument("background flow: need at least two traders");
  }
  if (p.price_dispersion_ticks < 0.0 || p.half_spread_ticks < 0.0) {
    throw std::invalid_argument("background flow: spread and dispersion must be >= 0");
  }
}

Ticks snap(double price, Ticks tick) {
  const auto t = static_cast<Ticks>(std::llround(price / static_cast<double>(tick))) * tick;
  return t < tick ? tick : t;
}

}  // namespace

std::vector<FlowEvent> generate_background_flow(std::uint64_t seed, const FlowParams& params,
                                                const FundamentalPath& fundamental,
                                                Ticks tick_size) {
  check(params);
  std::vector<FlowEvent> events;
  if (params.arrival_rate == 0.0) {
    return events;
  }
  Rng rng(seed);
  const auto steps = static_cast<int>(fundamental.values.size());
  events.reserve(static_cast<std::size_t>(params.arrival_rate * steps * 1.2) + 16);
  for (int step = 0; step < steps; ++step) {
    const auto arrivals = rng.poisson(params.arrival_rate);
    const auto anchor = static_cast<double>(fundamental.values[static_cast<std::size_t>(step)]);
    for (std::uint64_t i = 0; i < arrivals; ++i) {
      FlowEvent e;
      e.step = step;
      e.owner = params.first_trader_id +
                static_cast<ParticipantId>(rng.below(static_cast<std::uint64_t>(params.traders)));
      e.side = rng.bernoulli(0.5) ? Side::buy : Side::sell;
      e.quantity = rng.uniform_int(params.min_size, params.max_size);
      if (rng.bernoulli(params.market_fraction)) {
        e.kind = OrderKind::market;
      } else {
        e.kind = OrderKind::limit;
        const double center = e.side == Side::buy ? anchor - params.half_spread_ticks
                                                  : anchor + params.half_spread_ticks;
        e.price = snap(rng.normal(center, params.price_dispersion_ticks), tick_size);
      }
      events.push_back(e);
    }
  }
  return events;
}

std::vector<FlowEvent> opening_book(const FlowParams& params, Ticks open_price, Ticks tick_size) {
  check(params);
  std::vector<FlowEvent> events;
  const auto tick = static_cast<double>(tick_size);
  const Ticks spread =
      std::max<Ticks>(1, static_cast<Ticks>(std::ceil(params.half_spread_ticks / tick))) * tick_size;
  open_price = snap(static_cast<double>(open_price), tick_size);
  for (int level = 0; level < params.opening_levels; ++level) {
    const Ticks offset = spread + level * tick_size;
    // Alternate owners so the ladder is spread across the background pool.
    const ParticipantId bid_owner = params.first_trader_id + (2 * level) % params.traders;
    const ParticipantId ask_owner = params.first_trader_id + (2 * level + 1) % params.traders;
    events.push_back({0, bid_owner, Side::buy, OrderKind::limit,
                      snap(static_cast<double>(open_price - offset), tick_size),
                      params.opening_size});
    events.push_back({0, ask_owner, Side::sell, OrderKind::limit,
                      snap(static_cast<double>(open_price + offset), tick_size),
                      params.opening_size});
  }
  return events;
}

}  // namespace tokenlab::market
