#pragma once

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "tokenlab/market/types.hpp"

namespace tokenlab::market {

enum class SubmitStatus : std::uint8_t {
  rested,             // no fills, whole quantity rests
  partially_rested,   // some fills, remainder rests
  filled,             // completely filled
  exhausted_liquidity,  // market order ran out of opposite liquidity; remainder cancelled
  rejected,
};

[[nodiscard]] std::string_view to_string(SubmitStatus s) noexcept;

struct SubmitResult {
  SubmitStatus status = SubmitStatus::rested;
  std::vector<Trade> fills;
  Shares resting_quantity = 0;
  Shares cancelled_quantity = 0;
  /// Resting orders of the same owner removed instead of self-matching.
  std::vector<OrderId> self_trade_cancels;
  std::string_view reject_reason;
  /// The order as accepted, with its assigned seq.
  Order order;
};

struct LevelView {
  Ticks price = 0;
  Shares quantity = 0;
  std::size_t orders = 0;

  friend bool operator==(const LevelView&, const LevelView&) = default;
};

/// Single-instrument limit order book with strict price-time priority.
///
/// Trades execute at the resting order's price. An incoming order that
/// would trade against a resting order of the same owner cancels that
/// resting order and keeps matching (cancel-resting self-trade prevention).
/// Every accepted order and every trade receives the next value of one
/// monotone sequence counter.
class OrderBook {
 public:
  explicit OrderBook(Ticks tick_size = 1) : tick_size_(tick_size) {}

  SubmitResult submit(Order order);

  /// Removes a resting order. Returns the quantity removed, 0 when the order
  /// is no longer resting at that price.
  Shares cancel(Side side, Ticks price, OrderId id);

  [[nodiscard]] std::optional<Ticks> best_bid() const;
  [[nodiscard]] std::optional<Ticks> best_ask() const;
  [[nodiscard]] std::vector<LevelView> depth(Side side, std::size_t levels) const;
  [[nodiscard]] std::size_t resting_orders() const noexcept { return resting_count_; }
  [[nodiscard]] Seq last_seq() const noexcept { return next_seq_ - 1; }
  [[nodiscard]] Ticks tick_size() const noexcept { return tick_size_; }

  /// Resting orders of one level in queue order (testing and replay checks).
  [[nodiscard]] std::vector<Order> level_orders(Side side, Ticks price) const;

  /// True when the book is uncrossed and every resting quantity is positive.
  [[nodiscard]] bool sane() const;

 private:
  using Queue = std::deque<Order>;
  using Bids = std::map<Ticks, Queue, std::greater<>>;
  using Asks = std::map<Ticks, Queue, std::less<>>;

  template <typename Levels>
  void match_against(Levels& levels, Order& incoming, SubmitResult& result);

  Ticks tick_size_;
  Bids bids_;
  Asks asks_;
  Seq next_seq_ = 1;
  std::size_t resting_count_ = 0;
};

}  // namespace tokenlab::market
