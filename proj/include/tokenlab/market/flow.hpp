#pragma once

#include <cstdint>
#include <vector>

#include "tokenlab/market/fundamental.hpp"
#include "tokenlab/market/types.hpp"

namespace tokenlab::market {

struct FlowParams {
  /// Mean background orders per step (Poisson).
  double arrival_rate = 2.0;
  /// Probability that a background order is a market order.
  double market_fraction = 0.15;
  /// Limit buys center at fundamental - half_spread, sells at + half_spread.
  double half_spread_ticks = 2.0;
  /// Normal dispersion of limit prices around their center.
  double price_dispersion_ticks = 4.0;
  Shares min_size = 10;
  Shares max_size = 100;
  /// Background orders are owned by this many traders, ids starting at first_trader_id.
  int traders = 40;
  ParticipantId first_trader_id = 100;
  /// Opening book: this many levels each side, one order per level.
  int opening_levels = 10;
  Shares opening_size = 200;
  /// Background limit orders still resting this many steps after placement
  /// are cancelled at the start of a step. 0 keeps them until filled.
  int order_lifetime = 20;

  friend bool operator==(const FlowParams&, const FlowParams&) = default;
};

struct FlowEvent {
  int step = 0;
  ParticipantId owner = 0;
  Side side = Side::buy;
  OrderKind kind = OrderKind::limit;
  Ticks price = 0;
  Shares quantity = 0;

  friend bool operator==(const FlowEvent&, const FlowEvent&) = default;
};

/// Ambient order flow anchored to the contemporaneous fundamental. Events are
/// sorted by step and then by generation order.
///
/// Throws std::invalid_argument on a negative or non-finite arrival rate and
/// on inconsistent size or trader parameters. A zero rate yields no events.
[[nodiscard]] std::vector<FlowEvent> generate_background_flow(std::uint64_t seed,
                                                              const FlowParams& params,
                                                              const FundamentalPath& fundamental,
                                                              Ticks tick_size = 1);

/// Symmetric ladder around the opening price, submitted before step 0.
[[nodiscard]] std::vector<FlowEvent> opening_book(const FlowParams& params, Ticks open_price,
                                                  Ticks tick_size = 1);

}  // namespace tokenlab::market
